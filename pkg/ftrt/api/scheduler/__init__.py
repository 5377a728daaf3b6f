"""EDF admission control: primary placement, overload-first backup placement, commit or reject."""

from .policy import SchedulerPolicy, PRESETS
from .admission import (AdmissionDecision, Outcome, RejectReason,
                        admit, admit_batch, edf_order, place_backup, reject_reason_report)

__all__ = ['SchedulerPolicy', 'PRESETS', 'AdmissionDecision', 'Outcome', 'RejectReason',
           'admit', 'admit_batch', 'edf_order', 'place_backup', 'reject_reason_report']
