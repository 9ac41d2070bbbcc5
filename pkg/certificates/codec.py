"""Binary certificate format (magic MM2C, version 1); byte layout in docs/certificate-format.md."""

from typing import BinaryIO, List

from certificates.model import (
    FIELD_F2,
    Certificate,
    CertificateHeader,
    Degenerate,
    Flattening,
    ForcedProduct,
    OrbitRecord,
    Substitution,
    SubstitutionRecord,
    Technique,
    TechniqueKind,
)
from framing import FrameReader, FrameWriter, StructureError
from gf2 import BitMatrix, rref
from orbits.restriction import SymmetryWitness

CERT_MAGIC = b"MM2C"
CERT_VERSION = 1
MAX_RECORD_DEPTH = 64


def _write_technique(writer: FrameWriter, technique: Technique):
    writer.u8(int(technique.kind))
    if isinstance(technique, ForcedProduct):
        writer.u8(technique.perm)
    elif isinstance(technique, Degenerate):
        writer.u8(len(technique.added))
        for word in technique.added:
            writer.u64(word)
    elif isinstance(technique, Substitution):
        writer.u16(technique.target)
        writer.u32(len(technique.records))
        for record in technique.records:
            writer.u16(record.depth)
            writer.u64(record.subset)
            for row in record.witness.left.rows:
                writer.u16(row)
            for row in record.witness.right.rows:
                writer.u16(row)
            writer.u8(int(record.witness.transposed))
            writer.u32(record.child)


def to_bytes(cert: Certificate) -> bytes:
    header = cert.header
    writer = FrameWriter(CERT_MAGIC, CERT_VERSION)
    for value in (header.l, header.m, header.n, int(header.square), header.field):
        writer.u8(value)
    writer.u16(header.final_bound)
    writer.u64(header.step_limit)
    writer.u8(header.fp_bit_cap)
    for count in cert.layer_counts:
        writer.u32(count)
    for record in cert.orbits:
        writer.u8(record.dimension)
        for word in record.basis:
            writer.u64(word)
        writer.u16(record.bound)
        _write_technique(writer, record.technique)
    return writer.finish()


def write(cert: Certificate, sink: BinaryIO) -> int:
    """Serialize to `sink`; returns the byte count. I/O failures propagate as OSError."""
    check_well_formed(cert)
    data = to_bytes(cert)
    sink.write(data)
    return len(data)


def _read_technique(reader: FrameReader, l: int, m: int) -> Technique:
    tag = reader.u8()
    try:
        kind = TechniqueKind(tag)
    except ValueError:
        raise StructureError(f"unknown technique tag {tag}")
    if kind is TechniqueKind.FLATTENING:
        return Flattening()
    if kind is TechniqueKind.FORCED_PRODUCT:
        return ForcedProduct(reader.u8())
    if kind is TechniqueKind.DEGENERATE:
        count = reader.u8()
        return Degenerate(tuple(reader.u64() for _ in range(count)))
    target = reader.u16()
    records: List[SubstitutionRecord] = []
    for _ in range(reader.u32()):
        depth = reader.u16()
        subset = reader.u64()
        left = [reader.u16() for _ in range(l)]
        right = [reader.u16() for _ in range(m)]
        transposed = reader.u8()
        child = reader.u32()
        if transposed not in (0, 1):
            raise StructureError(f"transpose flag must be 0 or 1, got {transposed}")
        try:
            witness = SymmetryWitness(BitMatrix(left, l), BitMatrix(right, m), bool(transposed))
        except ValueError as e:
            raise StructureError(f"witness does not fit {l}x{m}: {e}")
        records.append(SubstitutionRecord(depth, subset, witness, child))
    return Substitution(target, tuple(records))


def from_bytes(data: bytes) -> Certificate:
    reader = FrameReader(data, CERT_MAGIC, CERT_VERSION)
    l, m, n, square, field = (reader.u8() for _ in range(5))
    if square not in (0, 1):
        raise StructureError(f"square flag must be 0 or 1, got {square}")
    final_bound = reader.u16()
    step_limit = reader.u64()
    fp_bit_cap = reader.u8()
    header = CertificateHeader(l, m, n, bool(square), final_bound, step_limit, fp_bit_cap, field)
    if not all(2 <= x <= 4 for x in (l, m, n)):
        raise StructureError(f"unsupported format <{l},{m},{n}>")
    layer_counts = tuple(reader.u32() for _ in range(l * m + 1))
    orbits = []
    for _ in range(sum(layer_counts)):
        dimension = reader.u8()
        basis = tuple(reader.u64() for _ in range(dimension))
        bound = reader.u16()
        orbits.append(OrbitRecord(dimension, basis, bound, _read_technique(reader, l, m)))
    reader.finish()
    cert = Certificate(header, layer_counts, tuple(orbits))
    check_well_formed(cert)
    return cert


def read(source: BinaryIO) -> Certificate:
    return from_bytes(source.read())


def _check_technique(technique: Technique, record: OrbitRecord, index: int, header, total: int):
    width = header.l * header.m
    where = f"orbit {index}"
    if isinstance(technique, ForcedProduct):
        if technique.perm not in (0, 1, 2):
            raise StructureError(f"{where}: rotation {technique.perm} not in 0..2")
    elif isinstance(technique, Degenerate):
        if not technique.added:
            raise StructureError(f"{where}: degenerate reduction adds no functional")
        for word in technique.added:
            if not 0 < word < (1 << width):
                raise StructureError(f"{where}: added functional {word:#x} out of range")
    elif isinstance(technique, Substitution):
        if record.bound > technique.target:
            raise StructureError(f"{where}: bound {record.bound} above target {technique.target}")
        if not technique.records:
            raise StructureError(f"{where}: substitution without records")
        for rec in technique.records:
            if not 1 <= rec.depth <= min(MAX_RECORD_DEPTH, technique.target):
                raise StructureError(f"{where}: record depth {rec.depth} out of range")
            if not (rec.subset >> (rec.depth - 1)) & 1 or rec.subset >> rec.depth:
                raise StructureError(f"{where}: subset {rec.subset:#x} invalid at depth {rec.depth}")
            if rec.witness.transposed and not header.square:
                raise StructureError(f"{where}: transposed witness in a non-square certificate")
            if not 0 <= rec.child < total:
                raise StructureError(f"{where}: child orbit {rec.child} out of range")
    elif not isinstance(technique, Flattening):
        raise StructureError(f"{where}: unknown technique {technique!r}")


def check_well_formed(cert: Certificate):
    """Structural invariants independent of any recomputation."""
    header = cert.header
    width = header.l * header.m
    if header.field != FIELD_F2:
        raise StructureError(f"field {header.field} unsupported; only F2")
    if header.square and not header.l == header.m == header.n:
        raise StructureError("square flag set on a non-square format")
    if len(cert.layer_counts) != width + 1:
        raise StructureError(f"expected {width + 1} layer counts, got {len(cert.layer_counts)}")
    if cert.layer_counts[0] != 1 or cert.layer_counts[width] != 1:
        raise StructureError("the empty and the full restriction set must each be one orbit")
    if len(cert.orbits) != sum(cert.layer_counts):
        raise StructureError(f"{len(cert.orbits)} orbit records for {sum(cert.layer_counts)} orbits")
    expected: List[int] = []
    for d, count in enumerate(cert.layer_counts):
        expected += [d] * count
    for index, (record, dimension) in enumerate(zip(cert.orbits, expected)):
        if record.dimension != dimension:
            raise StructureError(f"orbit {index}: dimension {record.dimension}, layer says {dimension}")
        if len(record.basis) != record.dimension:
            raise StructureError(
                f"orbit {index}: {len(record.basis)} basis words for dimension {record.dimension}"
            )
        if any(not 0 < word < (1 << width) for word in record.basis):
            raise StructureError(f"orbit {index}: basis word out of range")
        rows, _ = rref(record.basis)
        if tuple(rows) != record.basis:
            raise StructureError(f"orbit {index}: representative basis not in RREF")
        _check_technique(record.technique, record, index, header, len(cert.orbits))
    if cert.orbits[0].bound != header.final_bound:
        raise StructureError(
            f"final bound {header.final_bound} differs from orbit 0 bound {cert.orbits[0].bound}"
        )

