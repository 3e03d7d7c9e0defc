"""Period lattices, action coordinates, and monodromy from period frames."""

from .frames import PeriodFrame, closed_form_frame, closedness_defect  # noqa: F401
from .monodromy import monodromy_from_frame  # noqa: F401
from .numeric import numeric_periods  # noqa: F401
from .extension import (  # noqa: F401
    ActionChart,
    action_chart,
    action_extension_check,
    positive_a0,
)
