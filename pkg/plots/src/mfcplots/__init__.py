"""Offline figure generation for model-free control benchmark records.

Reads the scenario runner's CSV files (and optional field dumps) and
regenerates the standard figures; no in-process coupling to the simulation
package.
"""

from .figures import DEFAULT_STYLES, FigureSpec, render, spec_for_directory
from .schema import (RECORD_COLUMNS, FieldTable, RecordTable, SchemaError,
                     load_field, load_record, load_scenario_dir)

__version__ = "0.1.0"
