"""Binary catalog files, framed like certificates (magic MM2O)."""

from typing import BinaryIO, Optional

from framing import FrameReader, FrameWriter, StructureError
from errors import ContractViolation
from orbits.catalog import OrbitCatalog
from orbits.sharded import DEFAULT_SHARDS

CATALOG_MAGIC = b"MM2O"
CATALOG_VERSION = 1


def dump_catalog(catalog: OrbitCatalog, sink: BinaryIO) -> int:
    writer = FrameWriter(CATALOG_MAGIC, CATALOG_VERSION)
    writer.u8(catalog.l)
    writer.u8(catalog.m)
    writer.u8(int(catalog.square))
    writer.u32(len(catalog))
    for rep in catalog.representatives:
        writer.u8(rep.codim)
        for word in rep.basis:
            writer.u64(word)
    data = writer.finish()
    sink.write(data)
    return len(data)


def load_catalog(
    source: BinaryIO, shard_count: int = DEFAULT_SHARDS, memory_budget: Optional[int] = None
) -> OrbitCatalog:
    reader = FrameReader(source.read(), CATALOG_MAGIC, CATALOG_VERSION)
    l, m, square = reader.u8(), reader.u8(), reader.u8()
    if square not in (0, 1):
        raise StructureError(f"square flag must be 0 or 1, got {square}")
    count = reader.u32()
    bases = []
    for _ in range(count):
        depth = reader.u8()
        bases.append(tuple(reader.u64() for _ in range(depth)))
    reader.finish()
    try:
        return OrbitCatalog.from_representatives(
            l, m, bool(square), bases, shard_count, memory_budget
        )
    except ContractViolation as e:
        raise StructureError(f"invalid catalog file: {e}")
