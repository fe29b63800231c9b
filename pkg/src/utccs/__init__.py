"""Coupled chaotic maps, a chaos-based PRNG, and an image cipher with its audit battery."""

from .cbprng import Cbprng
from .cipher import DEFAULT_KEYS, KeySet, decrypt, decrypt_image, encrypt, encrypt_image
from .maps import MapSpec, SeedMap, Utf, coupling, couple_step, iterate_orbit, parse_map, seed_only

__all__ = [
    "Cbprng",
    "DEFAULT_KEYS",
    "KeySet",
    "MapSpec",
    "SeedMap",
    "Utf",
    "coupling",
    "couple_step",
    "decrypt",
    "decrypt_image",
    "encrypt",
    "encrypt_image",
    "iterate_orbit",
    "parse_map",
    "seed_only",
]
