from csifb.codec.bits import (
    FeedbackBudget,
    budget_for_bits,
    budget_for_target,
    feedback_bits,
    index_bits,
)
from csifb.codec.frame import decode_frame, encode_frame
from csifb.codec.permutation import permute_model
from csifb.codec.quantizer import Quantizer, quantize_feedback
from csifb.codec.registry import SCHEMES, SchemeSpec, get_scheme
from csifb.codec.schemes import FeedbackCodec, recover, sparsify
from csifb.codec.selection import (
    CompressedFeedback,
    SelectionPolicy,
    select,
)

__all__ = [
    "SCHEMES",
    "CompressedFeedback",
    "FeedbackBudget",
    "FeedbackCodec",
    "Quantizer",
    "SchemeSpec",
    "SelectionPolicy",
    "budget_for_bits",
    "budget_for_target",
    "decode_frame",
    "encode_frame",
    "feedback_bits",
    "get_scheme",
    "index_bits",
    "permute_model",
    "quantize_feedback",
    "recover",
    "select",
    "sparsify",
]
