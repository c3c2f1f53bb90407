"""JSON encoding of rings, elements, ideals and modules, and the fingerprint cache.

Module file schema::

    {"ring": "ZZ" | "ZZ[1/p,...]" | "QO(d)" | "LZ",
     "gens": g, "rel": [column, ...],          # presentation, or
     "steinitz": {"torsion": [{"ideal": I, "exp": k}, ...], "rank": r, "ideal": I},
     "label": "...", "expected": {...}}        # both optional

A relation column is a list of g ring elements; when g = 1 the single entry
may be written without the surrounding list. Elements are integers (ZZ,
ZZ[1/S]), pairs [a, b] meaning a + b*w (QO), or term lists
[{"x": e, "c": c}, ...] (LZ). Ideals are {"gen": elem}, {"p": p, "f": [f0, f1, ...]}
or {"hnf": [[a, b], [0, c]], "den": k}.
"""
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field

from .ideals import LaurentIdeal, PrincipalIdeal, QuadIdeal
from .modules import FpModule, SteinitzModule
from .quotients import Fingerprint
from .rings import Laurent, LaurentZ, QuadOrder, ZZ, ZZLoc, parse_ring_tag

CACHE_FORMAT = 1
CACHE_ENV = "PFMOD_CACHE"


class ModuleFileError(ValueError):
    """A schema or invariant violation, located by a JSON path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class ModuleFile:
    module: object
    label: str = ""
    expected: dict = field(default=None, compare=False)


def dumps(obj):
    """Canonical JSON text: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=2)


# ----- elements ---------------------------------------------------------------

def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def parse_element(ring, data, path="$"):
    if isinstance(ring, (ZZ, ZZLoc)):
        if not _is_int(data):
            raise ModuleFileError(path, f"integer expected, got {data!r}")
        return data
    if isinstance(ring, QuadOrder):
        if not (isinstance(data, list) and len(data) == 2 and all(_is_int(v) for v in data)):
            if _is_int(data):
                return (data, 0)
            raise ModuleFileError(path, f"pair [a, b] expected, got {data!r}")
        return (data[0], data[1])
    if _is_int(data):
        return Laurent(data)
    if not isinstance(data, list):
        raise ModuleFileError(path, f"list of terms expected, got {data!r}")
    terms = {}
    for i, t in enumerate(data):
        p = f"{path}[{i}]"
        if not isinstance(t, dict) or set(t) != {"x", "c"}:
            raise ModuleFileError(p, "term must be an object with keys 'x' and 'c'")
        if not _is_int(t["x"]) or not _is_int(t["c"]):
            raise ModuleFileError(p, "exponent and coefficient must be integers")
        if t["c"] == 0:
            raise ModuleFileError(f"{p}.c", "coefficients must be nonzero")
        if t["x"] in terms:
            raise ModuleFileError(f"{p}.x", f"repeated exponent {t['x']}")
        terms[t["x"]] = t["c"]
    return Laurent(terms)


def emit_element(ring, elem):
    if isinstance(ring, (ZZ, ZZLoc)):
        return elem
    if isinstance(ring, QuadOrder):
        return [elem[0], elem[1]]
    return [{"x": e, "c": c} for e, c in reversed(elem.terms)]


# ----- ideals -----------------------------------------------------------------

def parse_ideal(ring, data, path="$"):
    if not isinstance(data, dict):
        raise ModuleFileError(path, "ideal object expected")
    try:
        if "gen" in data:
            return PrincipalIdeal(ring, parse_element(ring, data["gen"], f"{path}.gen"))
        if "p" in data or "f" in data:
            if not isinstance(ring, LaurentZ):
                raise ModuleFileError(path, "(p, f) ideals are only defined over LZ")
            f = data.get("f")
            if not _is_int(data.get("p")) or not isinstance(f, list) or not all(_is_int(c) for c in f):
                raise ModuleFileError(path, "expected integer 'p' and coefficient list 'f'")
            return LaurentIdeal(data["p"], tuple(c % data["p"] for c in f))
        if "hnf" in data:
            if not isinstance(ring, QuadOrder):
                raise ModuleFileError(path, "Hermite ideals are only defined over QO(d)")
            h = data["hnf"]
            ok = (isinstance(h, list) and len(h) == 2
                  and all(isinstance(r, list) and len(r) == 2 and all(_is_int(v) for v in r) for r in h))
            if not ok:
                raise ModuleFileError(f"{path}.hnf", "2x2 integer matrix expected")
            den = data.get("den", 1)
            if not _is_int(den):
                raise ModuleFileError(f"{path}.den", "integer expected")
            return QuadIdeal.from_hnf_rows(ring, h, den)
    except ModuleFileError:
        raise
    except (ValueError, TypeError) as exc:
        raise ModuleFileError(path, str(exc)) from None
    raise ModuleFileError(path, "ideal needs one of 'gen', 'p'/'f' or 'hnf'")


def emit_ideal(ideal):
    if isinstance(ideal, PrincipalIdeal):
        return {"gen": emit_element(ideal.ring, ideal.gen)}
    if isinstance(ideal, LaurentIdeal):
        return {"p": ideal.p, "f": list(ideal.f)}
    out = {"hnf": ideal.hnf_rows}
    if ideal.den != 1:
        out["den"] = ideal.den
    return out


# ----- modules ----------------------------------------------------------------

def _parse_column(ring, g, col, path):
    if g == 1:
        single = _is_int(col) if not isinstance(ring, QuadOrder) else (
            _is_int(col) or (isinstance(col, list) and len(col) == 2 and all(_is_int(v) for v in col)))
        if isinstance(ring, LaurentZ) and isinstance(col, list) and (not col or isinstance(col[0], dict)):
            single = True
        if single:
            return (parse_element(ring, col, path),)
    if not isinstance(col, list) or len(col) != g:
        raise ModuleFileError(path, f"relation column must list {g} entries")
    return tuple(parse_element(ring, e, f"{path}[{i}]") for i, e in enumerate(col))


def parse_module_data(data):
    if not isinstance(data, dict):
        raise ModuleFileError("$", "top-level object expected")
    known = {"ring", "gens", "rel", "steinitz", "label", "expected"}
    extra = sorted(set(data) - known)
    if extra:
        raise ModuleFileError(f"$.{extra[0]}", "unknown key")
    if "ring" not in data or not isinstance(data["ring"], str):
        raise ModuleFileError("$.ring", "ring tag string required")
    try:
        ring = parse_ring_tag(data["ring"])
    except ValueError as exc:
        raise ModuleFileError("$.ring", str(exc)) from None
    label = data.get("label", "")
    if not isinstance(label, str):
        raise ModuleFileError("$.label", "string expected")
    expected = data.get("expected")
    if "steinitz" in data:
        if "rel" in data or "gens" in data:
            raise ModuleFileError("$", "give either a presentation or Steinitz data, not both")
        st = data["steinitz"]
        if not isinstance(st, dict):
            raise ModuleFileError("$.steinitz", "object expected")
        if not isinstance(ring, QuadOrder):
            raise ModuleFileError("$.ring", "Steinitz data requires a QO(d) ring")
        tors = []
        for i, t in enumerate(st.get("torsion", [])):
            p = f"$.steinitz.torsion[{i}]"
            if not isinstance(t, dict) or "ideal" not in t or not _is_int(t.get("exp")):
                raise ModuleFileError(p, "expected {'ideal': ..., 'exp': k}")
            tors.append((parse_ideal(ring, t["ideal"], f"{p}.ideal"), t["exp"]))
        rank = st.get("rank", 1)
        if not _is_int(rank):
            raise ModuleFileError("$.steinitz.rank", "integer expected")
        ideal = parse_ideal(ring, st["ideal"], "$.steinitz.ideal") if "ideal" in st else None
        try:
            mod = SteinitzModule(ring, tuple(tors), rank, ideal, label)
        except ValueError as exc:
            raise ModuleFileError("$.steinitz", str(exc)) from None
        return ModuleFile(mod, label, expected)
    g = data.get("gens")
    if not _is_int(g) or g < 1:
        raise ModuleFileError("$.gens", "positive integer expected")
    rel = data.get("rel", [])
    if not isinstance(rel, list):
        raise ModuleFileError("$.rel", "list of relation columns expected")
    cols = tuple(_parse_column(ring, g, c, f"$.rel[{j}]") for j, c in enumerate(rel))
    try:
        mod = FpModule(ring, g, cols, label)
    except (ValueError, TypeError) as exc:
        raise ModuleFileError("$.rel", str(exc)) from None
    return ModuleFile(mod, label, expected)


def parse_module_file(text):
    """Parse JSON text (str or bytes) into a ModuleFile."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModuleFileError("$", f"invalid JSON: {exc}") from None
    return parse_module_data(data)


def load_module(path):
    with open(path, "rb") as fh:
        return parse_module_file(fh.read())


def module_data(mf):
    """The canonical JSON object of a ModuleFile (or a bare module)."""
    if not isinstance(mf, ModuleFile):
        mf = ModuleFile(mf, getattr(mf, "label", ""))
    m = mf.module
    out = {"ring": m.ring.tag}
    if isinstance(m, SteinitzModule):
        st = {"rank": m.rank,
              "torsion": [{"ideal": emit_ideal(P), "exp": k} for P, k in m.torsion]}
        if m.rank >= 1:
            st["ideal"] = emit_ideal(m.ideal)
        out["steinitz"] = st
    else:
        out["gens"] = m.gens
        cols = []
        for col in m.relations:
            enc = [emit_element(m.ring, e) for e in col]
            cols.append(enc[0] if m.gens == 1 else enc)
        out["rel"] = cols
    if mf.label:
        out["label"] = mf.label
    if mf.expected is not None:
        out["expected"] = mf.expected
    return out


def emit_module(mf):
    return dumps(module_data(mf))


def module_hash(m):
    """Content hash of the canonical serialization (label excluded)."""
    mod = m.module if isinstance(m, ModuleFile) else m
    data = module_data(ModuleFile(mod))
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()


# ----- finite modules and reports ---------------------------------------------

def finite_module_data(q):
    return {"factors": list(q.factors),
            "action": [list(r) for r in q.action] if q.action is not None else None}


def fingerprint_data(fp, mhash=None):
    out = {"bound": fp.bound, "classes": list(fp.classes), "count": len(fp.classes)}
    if mhash is not None:
        out["module_hash"] = mhash
    return out


# ----- cache ------------------------------------------------------------------

class FingerprintCache:
    """Fingerprints keyed by (module hash, bound) in one JSON file."""

    def __init__(self, path=None):
        self.path = path or os.environ.get(CACHE_ENV) or os.path.join(os.getcwd(), ".pfmod-cache.json")
        self.entries = {}
        self._load()

    def _load(self):
        try:
            with open(self.path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError):
            return
        if isinstance(data, dict) and data.get("format") == CACHE_FORMAT:
            self.entries = data.get("entries", {})

    @staticmethod
    def key(mhash, bound):
        return f"{mhash}:{bound}"

    def get(self, mhash, bound):
        hit = self.entries.get(self.key(mhash, bound))
        if hit is None:
            return None
        return Fingerprint(hit["bound"], tuple(hit["classes"]))

    def put(self, mhash, fp):
        self.entries[self.key(mhash, fp.bound)] = fingerprint_data(fp, mhash)
        self._save()

    def _save(self):
        directory = os.path.dirname(os.path.abspath(self.path))
        fd, tmp = tempfile.mkstemp(prefix=".pfmod-cache-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"format": CACHE_FORMAT, "entries": self.entries}, fh, sort_keys=True)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def cached_fingerprint(m, bound, cache=None, **kwargs):
    from .quotients import fingerprint
    if cache is None:
        return fingerprint(m, bound, **kwargs)
    h = module_hash(m)
    hit = cache.get(h, bound)
    if hit is not None:
        return hit
    fp = fingerprint(m, bound, **kwargs)
    cache.put(h, fp)
    return fp
