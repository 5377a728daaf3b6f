import os


def print_internal_error(io_handler=None):
    import traceback
    import sys
    if io_handler is None:
        io_handler = sys.stderr
    traceback.print_exception(*sys.exc_info(),
                              file=io_handler)


class Error(Exception):
    """ Base class for other custom exceptions """
    message = None

    def __str__(self):
        return self.message or self.__class__.__name__


class InvalidTaskError(Error):
    """ Raised when a task tuple violates one or more of its inequalities """

    def __init__(self, task_id=None, violations=None):
        self.task_id = task_id
        self.violations = list(violations or [])
        subject = "task" if task_id is None else "task {}".format(task_id)
        if self.violations:
            self.message = "Invalid {}: {}".format(subject, "; ".join(self.violations))
        else:
            self.message = "Invalid {}".format(subject)


class UnclassifiableFaultError(Error):
    """ Raised when a rate tuple matches none of the fault classes """

    def __init__(self, rates=None):
        self.rates = rates
        if rates is not None:
            self.message = "Unclassifiable fault rates: {}".format(rates)
        else:
            self.message = "Unclassifiable fault rates"


class InvalidParamsError(Error):
    """ Raised when generator, policy or simulation parameters are out of range """

    def __init__(self, message=None):
        if message is None:
            self.message = "Invalid parameters"
        else:
            self.message = message


class ReservationConflict(Error):
    """ Raised when a reservation would break a processor timeline invariant

    The `kind` attribute names the violated rule, e.g. 'PrimaryOverlap',
    'ForbiddenOverload', 'SpaceExclusion', 'TimeExclusion', 'FailedProcessor'.
    """

    def __init__(self, kind, reservation=None, others=None):
        self.kind = kind
        self.reservation = reservation
        self.others = tuple(others or ())
        self.message = "{}: {}".format(kind, reservation)
        if self.others:
            self.message += " conflicts with {}".format(", ".join(str(o) for o in self.others))


class ReservationNotFound(Error):
    """ Raised when releasing a reservation that does not exist """

    def __init__(self, task_id=None, kind=None):
        self.task_id = task_id
        self.kind = kind
        self.message = "No reservation for task {} ({})".format(task_id, kind)


class ScenarioError(Error):
    """ Raised when a scenario document does not parse into a valid configuration """

    def __init__(self, message=None, file_name=None, field=None, line=None):
        self.file_name = os.path.basename(str(file_name)) if file_name is not None else None
        self.field = field
        self.line = line
        location = []
        if self.file_name:
            location.append(self.file_name)
        if line is not None:
            location.append("line {}".format(line))
        if field:
            location.append(str(field))
        message = message or "The scenario is not valid"
        self.message = "{}: {}".format(", ".join(location), message) if location else message


class ConfigError(Error):
    """ Raised when a configuration key is missing or malformed """

    def __init__(self, message=None):
        if message is None:
            self.message = "Configuration error"
        else:
            self.message = message


class MalformedTraceError(Error):
    """ Raised when a trace is not well-formed """

    def __init__(self, message=None, line=None):
        self.line = line
        message = message or "Malformed trace"
        self.message = message if line is None else "line {}: {}".format(line, message)


class MalformedReportError(Error):
    """ Raised when a report document cannot be loaded """

    def __init__(self, message=None, file_name=None):
        self.file_name = os.path.basename(str(file_name)) if file_name is not None else None
        message = message or "Malformed report"
        self.message = message if self.file_name is None else "{}: {}".format(self.file_name, message)


class UnknownTaskError(Error):
    """ Raised when a reservation references a task that is not in the task set """

    def __init__(self, task_id=None):
        self.task_id = task_id
        self.message = "Reservation references unknown task {}".format(task_id)


class OracleCapExceeded(Error):
    """ Raised when an exhaustive search is requested beyond its size caps """

    def __init__(self, message=None):
        if message is None:
            self.message = "Instance too large for exhaustive search"
        else:
            self.message = message


class InvariantBreach(Error):
    """ Raised when the simulator detects a broken runtime invariant """

    def __init__(self, message=None):
        if message is None:
            self.message = "Internal invariant breached"
        else:
            self.message = message
