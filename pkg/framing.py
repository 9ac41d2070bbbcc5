"""Little-endian binary framing shared by certificates and catalog dumps.

A frame is: 4-byte magic, u32 version, body, u32 CRC-32 (zlib polynomial
0xEDB88320) over every preceding byte.
"""

import struct
import zlib

from errors import MMRankError


class CertificateError(MMRankError):
    """A binary certificate or catalog file failed to decode."""

    code = "structure"


class BadMagicError(CertificateError):
    code = "bad-magic"


class VersionMismatchError(CertificateError):
    code = "version"


class ChecksumError(CertificateError):
    code = "crc"


class StructureError(CertificateError):
    code = "structure"


class FrameWriter:
    def __init__(self, magic: bytes, version: int):
        self.buffer = bytearray(magic)
        self.u32(version)

    def _pack(self, fmt: str, value: int):
        try:
            self.buffer += struct.pack(fmt, value)
        except struct.error as e:
            raise StructureError(f"value {value} does not fit field {fmt}: {e}")

    def u8(self, value: int):
        self._pack("<B", value)

    def u16(self, value: int):
        self._pack("<H", value)

    def u32(self, value: int):
        self._pack("<I", value)

    def u64(self, value: int):
        self._pack("<Q", value)

    def finish(self) -> bytes:
        crc = zlib.crc32(bytes(self.buffer)) & 0xFFFFFFFF
        return bytes(self.buffer) + struct.pack("<I", crc)


class FrameReader:
    """Decodes one frame; `finish` checks the trailing checksum."""

    def __init__(self, data: bytes, magic: bytes, version: int):
        self.data = data
        if data[: len(magic)] != magic:
            raise BadMagicError(f"expected magic {magic!r}, got {data[:len(magic)]!r}")
        self.offset = len(magic)
        found = self.u32()
        if found != version:
            raise VersionMismatchError(f"unsupported version {found}, expected {version}")

    def _unpack(self, fmt: str, size: int) -> int:
        end = self.offset + size
        if end > len(self.data) - 4:
            raise StructureError(f"stream truncated at byte {self.offset}")
        (value,) = struct.unpack_from(fmt, self.data, self.offset)
        self.offset = end
        return value

    def u8(self) -> int:
        return self._unpack("<B", 1)

    def u16(self) -> int:
        return self._unpack("<H", 2)

    def u32(self) -> int:
        return self._unpack("<I", 4)

    def u64(self) -> int:
        return self._unpack("<Q", 8)

    def finish(self):
        if len(self.data) - self.offset != 4:
            raise StructureError(
                f"{len(self.data) - self.offset - 4} unexpected bytes before the checksum"
            )
        (stored,) = struct.unpack_from("<I", self.data, self.offset)
        actual = zlib.crc32(self.data[: self.offset]) & 0xFFFFFFFF
        if stored != actual:
            raise ChecksumError(f"checksum mismatch: stored {stored:#010x}, computed {actual:#010x}")
