class CoevoError(Exception):
    """
    Base class for all errors raised by ``coevo``.
    """
    
    pass


class DomainError(CoevoError, ValueError):
    """
    Raised when a value lies outside the mathematical domain of a function,
    e.g. a probability outside ``[0, 1]`` or a non-finite payoff.
    """
    
    pass


class OutOfScaleError(DomainError):
    """
    Raised when a payoff gap exceeds the normalisation term ``U_max`` used by
    the imitation probability.
    """
    
    pass


class PreconditionError(CoevoError, ValueError):
    """
    Raised when the inputs to an operation do not satisfy its preconditions,
    e.g. an invalid parameter record or the wrong number of behaviours.
    """
    
    pass


class NetworkError(PreconditionError):
    """
    Raised when a regular network cannot be constructed with the requested
    size and degree.
    """
    
    pass


class IntegrationError(CoevoError):
    """
    Raised when numerical integration fails. The ``step`` attribute holds the
    index of the failing step.
    """
    
    def __init__(self, message, step=None):
        
        super().__init__(message)
        self.step = step


class SteadyStateError(CoevoError):
    """
    Raised when an operation requires a steady state and the parameters sit
    on the ``k_bar = gamma / beta_1`` boundary, where none exists.
    """
    
    pass


class ConstraintViolationError(CoevoError):
    """
    Raised when adjusted parameters admit no interior (Case 3) steady state
    during behaviour guidance.
    """
    
    pass


class DescentError(CoevoError):
    """
    Raised when a descent step cannot be pulled back inside the feasible
    interior.
    """
    
    pass


class InsufficientDataError(CoevoError):
    """
    Raised when there is not enough data to perform an estimate.
    """
    
    pass


class UndefinedCorrelationError(CoevoError):
    """
    Raised when a correlation coefficient is undefined, i.e. one of the
    series has zero variance.
    """
    
    pass


class ConfigError(CoevoError):
    """
    Used to indicate a problem with an experiment configuration file or
    command line override. Formats as ``path:line: message`` when the
    location is known.
    """
    
    def __init__(self, message, path=None, line=None):
        
        super().__init__(message)
        self.message = message
        self.path = path
        self.line = line
    
    def __str__(self):
        
        if self.path and self.line:
            return f'{self.path}:{self.line}: {self.message}'
        elif self.path:
            return f'{self.path}: {self.message}'
        
        return self.message


class CommandError(CoevoError):
    """
    Used to indicate a problem during the execution of a command, yielding a
    nicely printed error message in the appropriate output stream (e.g.
    ``stderr``).
    """
    
    pass
