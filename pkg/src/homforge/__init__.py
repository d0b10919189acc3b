"""Recursive presentations of countable homogeneous structures, oracle-string
colourings of the copies of a finite structure, and the greedy extraction of
a monochromatic embedded image, with verifiable certificates."""

from .ages import (
    CopyEnumeration,
    copy_rank,
    disjoint_copy_sequence,
    enumerate_copies,
    max_copy_index,
)
from .bits import BitSource, bit_at, complement, literal_source, prng_source
from .encodings import EffectiveEncoding, b_event, build_chain, extend_chain
from .limits import (
    CompletePresentation,
    ExtensionTask,
    LdiagBitsPresentation,
    LdiagPrimesPresentation,
    LimitPresentation,
    RadoPresentation,
    check_homogeneity_sample,
    extension_witness,
    presentation_from_descriptor,
    rado_adjacent,
)
from .monochrome import (
    EmbeddingCertificate,
    GreedyState,
    monochromatic_embedding,
    mu_encoding,
    verify_certificate,
)
from .ranked import (
    ExtensionInstance,
    PrimeTable,
    bits_adjacent,
    check_rd_axioms,
    genericity_probe,
    prime_adjacent,
    prime_witness,
    psi,
)
from .structures import (
    FinStructure,
    Signature,
    complete_graph,
    decode_set,
    encode_set,
    find_isomorphism,
    graph,
    induced,
    is_embedding,
)

__version__ = "0.1.0"
