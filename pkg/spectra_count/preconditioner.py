from collections import namedtuple

import numpy as np
from scipy.sparse.linalg import LinearOperator

from .exceptions import ContractViolation
from .sparse import as_operator


PRECONDITIONER_KINDS = ("none", "absdiag", "ildl", "ldl-exact")


PreconditionerSpecData = namedtuple("PreconditionerSpecData", ("kind", "drop_tol"))


class PreconditionerSpec(PreconditionerSpecData):
    __slots__ = ()

    @classmethod
    def new(cls, kind="none", drop_tol=None):
        """
        Create description of preconditioner to build for a shift.

        :param kind: one of "none", "absdiag", "ildl" and "ldl-exact"
        :param drop_tol: drop tolerance, required for "ildl"
        :rtype: spectra_count.preconditioner.PreconditionerSpec
        """

        if kind not in PRECONDITIONER_KINDS:
            raise ContractViolation(f"Unknown preconditioner '{kind}', expected one of {PRECONDITIONER_KINDS}")

        if kind == "ildl":
            if drop_tol is None:
                raise ContractViolation("Preconditioner 'ildl' requires a drop tolerance")
            if drop_tol < 0:
                raise ContractViolation(f"Drop tolerance must be non-negative, got {drop_tol}")
            drop_tol = float(drop_tol)
        else:
            drop_tol = None

        return cls(kind, drop_tol)

    def to_dict(self):
        return {"kind": self.kind, "drop_tol": self.drop_tol}


class Preconditioner:
    """
    HPD operator ``T`` approximating ``|A - tau I|^-1``.

    :ivar ~.dimension: size of the vectors it acts on
    :ivar ~.name: kind of the preconditioner ("none", "ildl", ...)
    :ivar ~.info: construction details (boosted pivots, timings)
    """

    factored = False

    def __init__(self, dimension, name=None, info=None):
        self.dimension = int(dimension)
        self.name = name or self.get_identity()
        self.info = dict(info or {})

    def apply_t(self, v):
        raise NotImplementedError

    def _wrap(self, op):
        operator = as_operator(op)
        if operator.shape != (self.dimension, self.dimension):
            raise ContractViolation(
                f"Preconditioner of dimension {self.dimension} does not match operator {operator.shape}"
            )
        return operator

    def left_product(self, op):
        """Operator ``v -> T(op(v))``, the Arnoldi operator for ``op = A - tau I``."""
        operator = self._wrap(op)

        def matvec(v):
            return self.apply_t(np.ravel(operator.matvec(v)))

        return LinearOperator(operator.shape, matvec=matvec, dtype=float)

    @classmethod
    def get_identity(cls):
        return cls.__name__.lower()


class FactoredPreconditioner(Preconditioner):
    """
    Preconditioner given as ``T = M* M`` by the maps ``M`` and ``M*``.
    """

    factored = True

    def __init__(self, dimension, apply_m, apply_m_adjoint, name=None, info=None):
        super().__init__(dimension, name=name, info=info)
        self.apply_m = apply_m
        self.apply_m_adjoint = apply_m_adjoint

    def apply_t(self, v):
        return self.apply_m_adjoint(self.apply_m(v))

    def congruence(self, op):
        """Self-adjoint operator ``v -> M(op(M* v))``."""
        operator = self._wrap(op)

        def matvec(v):
            return self.apply_m(np.ravel(operator.matvec(self.apply_m_adjoint(np.ravel(v)))))

        return LinearOperator(operator.shape, matvec=matvec, rmatvec=matvec, dtype=float)


class UnfactoredPreconditioner(Preconditioner):
    def __init__(self, dimension, apply_t, name=None, info=None):
        super().__init__(dimension, name=name, info=info)
        self._apply_t = apply_t

    def apply_t(self, v):
        return self._apply_t(v)


def as_unfactored(p):
    """
    View factored preconditioner through ``apply_t = M* o M`` only.

    :rtype: spectra_count.preconditioner.UnfactoredPreconditioner
    """

    if not p.factored:
        return p
    return UnfactoredPreconditioner(p.dimension, p.apply_t, name=p.name, info=p.info)


def identity_preconditioner(dimension):
    def identity(v):
        return np.array(v, dtype=float)

    return FactoredPreconditioner(dimension, identity, identity, name="none")
