import json
from typing import Any, Callable, Dict, List


class RecordAggregateHandler:
    """
    Collects the JSON report of one command. Checks report through `callback`
    (one record per check or check cell); `context` is reported once as "config".
    """
    def __init__(self, command: str = "", to_string: Callable[[Any], str] = str):
        self.command: str = command
        self.to_string: Callable[[Any], str] = to_string
        self.context: Dict[str, Any] = {}
        self.records: List[Dict[str, Any]] = []
        self.warnings: List[str] = []

    def set_context(self, **context):
        self.context = dict(context)

    def callback(self, name, value, msg):
        # failure counts stay integers, residuals are formatted
        if not isinstance(value, int):
            value = self.to_string(value)
        self.records.append({"check": name, "value": value, "message": msg})

    def add_record(self, record: Dict[str, Any]):
        self.records.append(dict(record))

    def warn(self, msg: str):
        if msg not in self.warnings:
            self.warnings.append(msg)

    def failures(self) -> List[Dict[str, Any]]:
        return [r for r in self.records if r.get("verdict", "pass") != "pass"]

    def get_message(self) -> str:
        report = {"command": self.command, "config": self.context, "records": self.records, "warnings": self.warnings}
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
