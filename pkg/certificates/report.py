from typing import List

from certificates.model import Certificate, Degenerate, ForcedProduct, Substitution
from certificates.replay import ReplayError, replay_substitution
from orbits.restriction import RestrictionSet, format_functional

ROTATION_NAMES = ("ABC", "CAB", "BCA")


def _restrictions(rep: RestrictionSet) -> str:
    if not rep.basis:
        return "{}"
    return "{" + ", ".join(f"{format_functional(w, rep.l, rep.m)}=0" for w in rep.basis) + "}"


def _substitution_lines(rep: RestrictionSet, technique: Substitution) -> List[str]:
    components = [format_functional(w, rep.l, rep.m) for w in rep.extensions()]
    lines = []
    try:
        for sequence, record in replay_substitution(len(components), technique.records):
            if not sequence:
                continue
            indent = "    " * len(sequence)
            names = ", ".join(components[c] for c in sequence)
            if record is None:
                lines.append(f"{indent}[{names}] deeper")
            else:
                lines.append(f"{indent}[{names}] -> orbit {record.child} (+{record.size})")
    except ReplayError as e:
        lines.append(f"    replay error ({e.check}): {e}")
    return lines


def dump_text(cert: Certificate) -> str:
    """Readable report, most restricted orbits first, ending with the format's bound."""
    header = cert.header
    l, m = header.l, header.m
    lines = [
        f"certificate {header.format} over F2, {len(cert.orbits)} orbits"
        f"{' (transpose symmetry)' if header.square else ''}, "
        f"step limit {header.step_limit}, forced-product cap {header.fp_bit_cap}"
    ]
    order = sorted(range(len(cert.orbits)), key=lambda i: (-cert.orbits[i].dimension, i))
    for orbit_id in order:
        record = cert.orbits[orbit_id]
        rep = RestrictionSet(l, m, record.basis)
        technique = record.technique
        text = f"orbit {orbit_id} {_restrictions(rep)}: bound {record.bound} by {technique.kind.label}"
        if isinstance(technique, ForcedProduct):
            text += f" (rotation {ROTATION_NAMES[technique.perm]})"
        elif isinstance(technique, Degenerate):
            added = ", ".join(format_functional(w, l, m) for w in technique.added)
            text += f" (adding {added}=0)"
        elif isinstance(technique, Substitution):
            text += f" (target {technique.target}, {len(technique.records)} records)"
        lines.append(text)
        if isinstance(technique, Substitution):
            lines.extend(_substitution_lines(rep, technique))
    lines.append(f"R({header.format}) ≥ {header.final_bound}")
    return "\n".join(lines) + "\n"
