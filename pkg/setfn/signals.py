from blinker import Namespace

_signals = Namespace()

run_startup = _signals.signal("startup")
run_shutdown = _signals.signal("shutdown")
record_emitted = _signals.signal("record-emitted")
