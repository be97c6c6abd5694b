# -*- coding: utf-8 -*-
import sys
from typing import Optional, Sequence

from setfn.app import SetFnLab
from setfn.experiments import Laboratory


def create_app() -> SetFnLab:
    app = SetFnLab()
    app.add_service(Laboratory)
    return app


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(create_app().run(argv))


if __name__ == "__main__":
    main()
