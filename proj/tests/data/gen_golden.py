#!/usr/bin/env python3
# Regenerates golden_vectors.json with hashlib and the `cryptography` package,
# independently of the C++ code under test.
import hashlib
import json
import struct

from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric import ed25519


def h(b):
    return hashlib.sha256(b).digest()


src = bytes(range(32))
owner_a = bytes([0xAA]) * 32
owner_b = bytes([0xBB]) * 32

body = (b"\x01" + struct.pack("<H", 1)
        + src + struct.pack("<H", 3) + struct.pack("<Q", 100) + owner_a
        + struct.pack("<H", 2)
        + struct.pack("<Q", 60) + owner_b
        + struct.pack("<Q", 40) + owner_a)

key = h(src + struct.pack("<H", 3))
claim = b"\x4f" + key + struct.pack("<Q", 100) + owner_a
genesis = h(b"ACCEPT-GENESIS" + struct.pack("<I", 2)
            + struct.pack("<Q", 1000) + owner_a + struct.pack("<Q", 500) + owner_b)

seed = h(b"golden" + struct.pack("<Q", 0))
sk = ed25519.Ed25519PrivateKey.from_private_bytes(seed)
pk = sk.public_key().public_bytes(serialization.Encoding.Raw, serialization.PublicFormat.Raw)


def shard(owner, k):
    return int.from_bytes(h(owner)[:8], "little") % k


out = {
    "tx_encoding": body.hex(),
    "tx_digest": h(body).hex(),
    "input_key": key.hex(),
    "claim": claim.hex(),
    "claim_leaf": h(claim).hex(),
    "genesis_digest": genesis.hex(),
    "shard_a_4": shard(owner_a, 4),
    "shard_a_7": shard(owner_a, 7),
    "shard_b_7": shard(owner_b, 7),
    "ed25519_public_key": pk.hex(),
    "ed25519_claim_signature": sk.sign(claim).hex(),
}
print(json.dumps(out, indent=2))
