from omegabounds import constants, envelopes, identities, sieve, verifier

__all__ = ["constants", "envelopes", "identities", "sieve", "verifier"]
