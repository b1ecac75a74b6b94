"""Figure regeneration for the uplink power-control trade-off study."""

from .render import DEFAULT_LABELS, REQUIRED_COLUMNS, FigureSpec, SchemaError, load_rows, render

__version__ = "0.1.0"
