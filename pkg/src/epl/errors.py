"""Exception hierarchy shared by all modules."""


class EplError(Exception):
    """Base class for user-facing errors (CLI exit status 1)."""


class UntranslatedDynamicOperator(EplError):
    pass


class UnsupportedNesting(EplError):
    pass


class UnsupportedOperator(EplError):
    pass


class SigmaTooShort(EplError):
    pass


class FormulaSyntaxError(EplError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnknownActionFile(EplError):
    pass


class ModelError(EplError):
    """Malformed model or action-model input."""


class AgentMismatch(EplError):
    pass


class UndeclaredAgent(EplError):
    pass


class NotK45(EplError):
    pass


class NotSimplifiable(EplError):
    pass


class AnnouncementFalseAtPoint(EplError):
    pass


class MultiAgentFormula(EplError):
    pass


class TooManyAtoms(EplError):
    pass


class BetaChoiceIncomplete(EplError):
    pass


class PreconditionFailedAtPoint(EplError):
    pass


class UnknownKind(EplError):
    pass


class ParamOutOfRange(EplError):
    pass


class UnknownScenario(EplError):
    pass
