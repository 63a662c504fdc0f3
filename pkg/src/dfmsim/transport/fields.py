"""Temperature container, same per-grid layout as the pressure field."""

from ..flow.fields import CellField


class TemperatureField(CellField):
    """Cell temperatures across all dimensions."""
