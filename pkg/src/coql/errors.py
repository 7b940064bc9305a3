"""Exception hierarchy shared by all engine layers."""


class CoqlError(Exception):
    """Base class for every error raised by this package."""


# --- ordered-model errors ---------------------------------------------------

class ModelError(CoqlError):
    pass


class SecondRoot(ModelError):
    pass


class CycleDetected(ModelError):
    pass


class DuplicateLabel(ModelError):
    pass


class SyntacticViolation(ModelError):
    pass


class NoSuchDimension(ModelError):
    pass


class PathBudgetExceeded(ModelError):
    pass


# --- schema / data errors ---------------------------------------------------

class SchemaError(CoqlError):
    pass


class DuplicateConcept(SchemaError):
    pass


class UnknownParent(SchemaError):
    pass


class UnknownFieldType(SchemaError):
    pass


class InclusionCycle(SchemaError):
    pass


class UnknownConcept(SchemaError):
    pass


class DuplicateCollection(SchemaError):
    pass


class BindingMismatch(SchemaError):
    pass


class MissingBinding(SchemaError):
    pass


class MissingParentCollection(SchemaError):
    pass


class UnknownCollection(SchemaError):
    pass


class DuplicateIdentity(SchemaError):
    pass


class DanglingReference(SchemaError):
    pass


class MissingParent(SchemaError):
    pass


class TypeMismatch(SchemaError):
    pass


class NotFound(SchemaError):
    pass


class SegmentCountMismatch(SchemaError):
    pass


class UnknownField(SchemaError):
    pass


class NullParent(SchemaError):
    pass


# --- navigation errors ------------------------------------------------------

class NavError(CoqlError):
    pass


class UnknownDimension(NavError):
    pass


class NoParentConcept(NavError):
    pass


class NotAChildCollection(NavError):
    pass


class EmptyAggregate(NavError):
    pass


class NonNumericField(NavError):
    pass


class CollectionMismatch(NavError):
    pass


# --- language errors --------------------------------------------------------

class LexError(CoqlError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} at {line}:{col}")
        self.line = line
        self.col = col


class ParseError(CoqlError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} at {line}:{col}")
        self.line = line
        self.col = col


class EvalError(CoqlError):
    pass


class TypeCheckError(EvalError):
    def __init__(self, message, span=None):
        if span is not None:
            message = f"{message} at {span.line}:{span.col}"
        super().__init__(message)
        self.span = span


class BudgetExceeded(EvalError):
    pass
