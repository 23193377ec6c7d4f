"""CSV access and schema checks for the harness output files."""

import csv


class SchemaError(ValueError):
    """An input file cannot serve the requested panel."""


class Table:
    """A loaded CSV: column names plus rows kept as string dicts.

    Values stay untyped here; each panel parses the columns it draws.
    """

    def __init__(self, path):
        self.path = str(path)
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            self.columns = list(reader.fieldnames or [])
            self.rows = list(reader)

    def require(self, needed, panel: str):
        """Fail with a column diagnostic when the file cannot feed `panel`."""
        missing = [c for c in needed if c not in self.columns]
        if missing:
            raise SchemaError(
                f"{panel} needs column(s) {', '.join(missing)} not present in {self.path} "
                f"(file has: {', '.join(self.columns) or 'no header'})"
            )
        if not self.rows:
            raise SchemaError(f"{panel}: {self.path} has no data rows")
