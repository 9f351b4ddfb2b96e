#!/usr/bin/env python3
# Copyright 2026 The HYDRA-sim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent reference computations used to freeze expected values in the
C++ test suites. Pure Python (plus hashlib/hmac/cryptography); shares no code
with the library under test."""

import hashlib
import hmac
import struct

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

M32 = 0xFFFFFFFF


def rol(x, r):
    return ((x << r) | (x >> (32 - r))) & M32


def ror(x, r):
    return ((x >> r) | (x << (32 - r))) & M32


def speck_words(k, x, y):
    """k = [k0, l0, l1, l2]; returns (x, y) after 27 rounds."""
    a = k[0]
    l = [k[1], k[2], k[3]]
    for i in range(27):
        x = ((ror(x, 8) + y) & M32) ^ a
        y = rol(y, 3) ^ x
        nl = ((a + ror(l[0], 8)) & M32) ^ i
        l = l[1:] + [nl]
        a = rol(a, 3) ^ nl
    return x, y


Z3 = "11011011101011000110010111100000010010001010011100110100001111"


def simon_words(k, x, y):
    """k = [k0, k1, k2, k3]; returns (x, y) after 44 rounds."""
    ks = list(k)
    for i in range(4, 44):
        t = ror(ks[i - 1], 3) ^ ks[i - 3]
        t ^= ror(t, 1)
        ks.append((~ks[i - 4] & M32) ^ t ^ int(Z3[(i - 4) % 62]) ^ 3)
    for i in range(44):
        f = (rol(x, 1) & rol(x, 8)) ^ rol(x, 2)
        x, y = y ^ f ^ ks[i], x
    return x, y


def key_words(key16):
    return list(struct.unpack("<4I", key16))


def speck_block(key16, blk8):
    y, x = struct.unpack("<2I", blk8)
    x, y = speck_words(key_words(key16), x, y)
    return struct.pack("<2I", y, x)


def simon_block(key16, blk8):
    y, x = struct.unpack("<2I", blk8)
    x, y = simon_words(key_words(key16), x, y)
    return struct.pack("<2I", y, x)


def aes_block(key16, blk16):
    e = Cipher(algorithms.AES(key16), modes.ECB()).encryptor()
    return e.update(blk16) + e.finalize()


def cbc_mac(enc, bs, key, msg, native):
    data = len(msg).to_bytes(bs, "big") + msg
    if len(data) % bs:
        data += b"\0" * (bs - len(data) % bs)
    c = b"\0" * bs
    for i in range(0, len(data), bs):
        c = enc(key, bytes(p ^ q for p, q in zip(c, data[i:i + bs])))
    out = c
    while len(out) < native:
        c = enc(key, c)
        out += c
    return out[:native]


def mac(alg, key, msg, tag_len):
    if alg == "SPECK_64_128_CBC":
        t = cbc_mac(speck_block, 8, key, msg, 16)
    elif alg == "SIMON_64_128_CBC":
        t = cbc_mac(simon_block, 8, key, msg, 16)
    elif alg == "AES_128_CBC":
        t = cbc_mac(aes_block, 16, key, msg, 16)
    elif alg == "HMAC_SHA_256":
        t = hmac.new(key, msg, hashlib.sha256).digest()
    elif alg == "BLAKE2S_KEYED":
        t = hashlib.blake2s(msg, key=key).digest()
    return t[:tag_len]


def header(t, p, a, b):
    return struct.pack(">QIQQ", t, p, a, b)


def main():
    # Published Speck/Simon 64/128 vectors, word form.
    k = [0x03020100, 0x0b0a0908, 0x13121110, 0x1b1a1918]
    x, y = speck_words(k, 0x3b726574, 0x7475432d)
    print("speck64/128", hex(x), hex(y))
    x, y = simon_words(k, 0x656b696c, 0x20646e75)
    print("simon64/128", hex(x), hex(y))
    print("rfc4231 tc1", hmac.new(b"\x0b" * 20, b"Hi There", hashlib.sha256).hexdigest())
    print("blake2s kat key=00..1f in=empty", hashlib.blake2s(b"", key=bytes(range(32))).hexdigest())
    print("blake2s kat key=00..1f in=00..3f", hashlib.blake2s(bytes(range(64)), key=bytes(range(32))).hexdigest())

    key16 = bytes(range(16))
    key32 = bytes(range(32))
    msg = bytes((i * 7 + 3) & 0xFF for i in range(100))
    for alg in ["SPECK_64_128_CBC", "SIMON_64_128_CBC", "AES_128_CBC"]:
        print("mac", alg, "empty", mac(alg, key16, b"", 16).hex())
        print("mac", alg, "msg100", mac(alg, key16, msg, 16).hex())
    for alg in ["HMAC_SHA_256", "BLAKE2S_KEYED"]:
        print("mac", alg, "msg100", mac(alg, key32, msg, 32).hex())

    # K_Auth = native MAC of the context string, truncated to key size.
    ctx = b"HYDRA-KAUTH-v1"
    print("kauth SPECK", mac("SPECK_64_128_CBC", key16, ctx, 16).hex())
    print("kauth HMAC", mac("HMAC_SHA_256", key32, ctx, 32).hex())

    # Attestation report over a known 4 KiB image.
    image = bytes((i * 7 + 3) & 0xFF for i in range(4096))
    kauth = mac("SPECK_64_128_CBC", key16, ctx, 16)
    for (t, p, a, b) in [(1500, 1, 0, 4095), (1501, 1, 0, 0), (1502, 1, 100, 199)]:
        h = header(t, p, a, b)
        print("request", t, p, a, b, "C_R", mac("SPECK_64_128_CBC", kauth, h, 16).hex(),
              "report", mac("SPECK_64_128_CBC", key16, h + image[a:b + 1], 16).hex())

    # Same image after malware zeroes byte 1000; also an 8-byte BLAKE2s tag.
    infected = bytearray(image)
    infected[1000] = 0
    h = header(1600, 1, 0, 4095)
    print("infected report", mac("SPECK_64_128_CBC", key16, h + bytes(infected), 16).hex())
    print("blake2s/8 report", mac("BLAKE2S_KEYED", key32, h + image, 8).hex())


if __name__ == "__main__":
    main()
