from .base import KINDS, Backend, BackendConfig, CotResponse, ElicitationRequest, WeightResponse
from .http import HttpBackend
from .lexicon import Lexicon, lexicon_membership
from .oracle import LexiconBackend
from .parsing import extract_json_object, renormalize_simplex


def elicit(request: ElicitationRequest, backend):
    """Dispatch ``request`` to ``backend`` (a LexiconBackend or HttpBackend)."""
    return backend.elicit(request)


__all__ = [
    "KINDS", "Backend", "BackendConfig", "CotResponse", "ElicitationRequest", "WeightResponse",
    "HttpBackend", "Lexicon", "LexiconBackend", "elicit", "extract_json_object",
    "lexicon_membership", "renormalize_simplex",
]
