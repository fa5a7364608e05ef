"""Command-line front end.

Instance files and reports are JSON.  An instance file looks like::

    {"dim": 2,
     "ideals": {"m": [[1, 0], [0, 1]], "I": [[3, 0], [0, 3]]},
     "filtrations": {"F": {"kind": "adic", "ideal": "m"},
                     "G": {"kind": "integral_closure", "ideal": "I"}},
     "module": ["0"],
     "task": {"F": "F", "Fs": ["G"], "J": "m"}}

``module`` lists summand ideal names, "0" standing for a free summand.
Exit status: 0 success, 1 a check failed, 2 invalid input, 3 a search bound
was exhausted.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass

from . import verify
from .bhattacharya import Config, mixed_table
from .errors import InputError, MixmultError, ResourceError
from .filtration import DEFAULT_STABILIZATION_BOUND, KINDS, Filtration
from .module import ModuleModel
from .monomial import MonomialIdeal, zero_ideal
from .rees import rees_direct, rees_via_sum_detail

TOP_KEYS = ("dim", "ideals", "filtrations", "module", "task")


@dataclass(frozen=True)
class InstanceFile:
    dim: int
    ideals: dict
    filtrations: dict
    module: list
    task: dict

    @classmethod
    def from_dict(cls, doc: dict) -> "InstanceFile":
        if not isinstance(doc, dict):
            raise InputError("instance file must hold a JSON object")
        unknown = set(doc) - set(TOP_KEYS)
        if unknown:
            raise InputError(f"unknown top-level keys {sorted(unknown)}")
        if "dim" not in doc:
            raise InputError("instance file needs 'dim'")
        inst = cls(doc["dim"], doc.get("ideals", {}), doc.get("filtrations", {}),
                   doc.get("module", ["0"]), doc.get("task", {}))
        inst.validate()
        return inst

    def to_dict(self) -> dict:
        return {"dim": self.dim, "ideals": self.ideals, "filtrations": self.filtrations,
                "module": self.module, "task": self.task}

    def validate(self) -> None:
        if not isinstance(self.dim, int) or isinstance(self.dim, bool) or self.dim < 1:
            raise InputError(f"dim must be a positive integer, got {self.dim!r}")
        for name, gens in self.ideals.items():
            if name == "0":
                raise InputError("ideal name '0' is reserved for the zero ideal")
            if not isinstance(gens, list) or not all(isinstance(g, list) for g in gens):
                raise InputError(f"ideal {name!r} must be a list of exponent lists")
            for g in gens:
                if len(g) != self.dim or not all(isinstance(x, int) for x in g):
                    raise InputError(f"ideal {name!r}: exponent {g} is not {self.dim} integers")
        for name, fdef in self.filtrations.items():
            if not isinstance(fdef, dict) or set(fdef) != {"kind", "ideal"}:
                raise InputError(f"filtration {name!r} needs exactly 'kind' and 'ideal'")
            if fdef["kind"] not in KINDS:
                raise InputError(f"filtration {name!r}: unknown kind {fdef['kind']!r}")
            self._ideal_name(fdef["ideal"])
        if not isinstance(self.module, list):
            raise InputError("module must be a list of summand ideal names")
        for name in self.module:
            self._ideal_name(name, allow_zero=True)
        if not isinstance(self.task, dict):
            raise InputError("task must be an object")
        for key in ("F", "Fs"):
            for name in self._names(key):
                if name not in self.filtrations:
                    raise InputError(f"task.{key}: unknown filtration {name!r}")
        for key in ("J", "I", "Is"):
            for name in self._names(key):
                self._ideal_name(name)
        for key in ("W1", "W2"):
            for name in self._names(key):
                self._ideal_name(name, allow_zero=True)

    def _names(self, key: str) -> list:
        v = self.task.get(key)
        if v is None:
            return []
        return v if isinstance(v, list) else [v]

    def _ideal_name(self, name, allow_zero: bool = False) -> None:
        if allow_zero and name == "0":
            return
        if name not in self.ideals:
            raise InputError(f"unknown ideal {name!r}")

    # resolution into package objects

    def ideal(self, name: str) -> MonomialIdeal:
        if name == "0":
            return zero_ideal(self.dim)
        return MonomialIdeal.of(self.dim, self.ideals[name])

    def filtration(self, name: str) -> Filtration:
        fdef = self.filtrations[name]
        return Filtration(fdef["kind"], self.ideal(fdef["ideal"]))

    def module_from(self, names: list) -> ModuleModel:
        return ModuleModel(self.dim, tuple(self.ideal(n) for n in names))

    def need(self, key: str):
        if key not in self.task:
            raise InputError(f"task needs {key!r}")
        return self.task[key]

    def payload(self) -> dict:
        """Every check argument the task supplies."""
        t, p = self.task, {"M": self.module_from(self.module)}
        if "F" in t:
            p["F"] = self.filtration(t["F"])
        if "Fs" in t:
            p["Fs"] = [self.filtration(n) for n in t["Fs"]]
        if "J" in t:
            p["J"] = self.ideal(t["J"])
        if "I" in t:
            p["I"] = self.ideal(t["I"])
        for key in ("W1", "W2"):
            if key in t:
                p[key] = self.module_from(t[key])
        return p


def load_instance(path: str) -> InstanceFile:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return InstanceFile.from_dict(doc)


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _table_result(table) -> dict:
    return {"q": table.q, "table": verify.table_json(table.entries)}


def _cmd_mixed_table(inst: InstanceFile, args, config: Config) -> tuple:
    p = inst.payload()
    inst.need("F"), inst.need("Fs")
    table = mixed_table(p["F"], p["Fs"], p["M"], config)
    return _table_result(table), table.provenance, None


def _cmd_mixed(inst: InstanceFile, args, config: Config) -> tuple:
    p = inst.payload()
    inst.need("F"), inst.need("Fs")
    k0 = args.k0 if args.k0 is not None else inst.need("k0")
    k = args.k if args.k is not None else inst.need("k")
    key = (int(k0), *map(int, k))
    table = mixed_table(p["F"], p["Fs"], p["M"], config)
    if key not in table.entries:
        raise InputError(f"type {list(key)} is not one of {[list(t) for t in table.entries]}")
    return {"type": list(key), "value": table.entries[key]}, table.provenance, None


def _cmd_rees(inst: InstanceFile, args, config: Config) -> tuple:
    p = inst.payload()
    inst.need("J"), inst.need("Fs")
    result, prov, verdict = {}, {}, None
    if args.method in ("sum", "both"):
        value, table = rees_via_sum_detail(p["J"], p["Fs"], p["M"], config)
        result["sum"] = value
        prov["sum"] = table.provenance
    if args.method in ("direct", "both"):
        r = rees_direct([F.base for F in p["Fs"]], p["J"], p["M"], config.n_max)
        result["direct"] = r.value
        prov["direct"] = {"n_max": r.n_max, "detected_degree": r.detected_degree,
                          "expected_degree": r.expected_degree}
    if args.method == "both":
        verdict = verify.PASS if result["sum"] == result["direct"] else verify.FAIL
    return result, prov, verdict


def _cmd_verify(inst: InstanceFile, args, config: Config) -> tuple:
    p = inst.payload()
    kinds = verify.KINDS if args.kind == "all" else (args.kind,)
    reports = [verify.run_check(verify.CheckInstance(k, dict(p)), config).to_dict()
               for k in kinds]
    if len(kinds) == 1:
        rep = reports[0]
        if rep["verdict"] == verify.ERROR:
            raise ResourceError(rep["provenance"]["reason"])
        if rep["verdict"] == verify.INAPPLICABLE:
            raise InputError(rep["provenance"]["reason"])
        return {"left": rep["left"], "right": rep["right"]}, rep["provenance"], rep["verdict"]
    return {"reports": reports}, {}, _overall(reports)


def _overall(reports: list) -> str:
    verdicts = {r["verdict"] for r in reports}
    if verify.FAIL in verdicts or verify.ERROR in verdicts:
        return verify.FAIL
    return verify.PASS


def _config(args) -> Config:
    return Config(stabilization_bound=args.stabilization_bound, window=args.window,
                  workers=args.workers, t_max=args.t_max, n_max=args.n_max)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--stabilization-bound", type=int, default=DEFAULT_STABILIZATION_BOUND)
    common.add_argument("--window", type=int, default=None,
                        help="grid edge for the degree check (default q+2)")
    common.add_argument("--n-max", type=int, default=None,
                        help="Rees profile length (default 3(dim M + s) + 6)")
    common.add_argument("--t-max", type=int, default=None,
                        help="largest accepted finiteness certificate")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("-o", "--output", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="mixmult", description=(
        "Mixed multiplicities and Rees multiplicities of monomial filtrations."))
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("mixed-table", parents=[common], help="every mixed multiplicity")
    p.add_argument("instance")
    p = sub.add_parser("mixed", parents=[common], help="one mixed multiplicity")
    p.add_argument("instance")
    p.add_argument("--k0", type=int)
    p.add_argument("--k", type=int, nargs="+")
    p = sub.add_parser("rees", parents=[common], help="multi-Rees module multiplicity")
    p.add_argument("instance")
    p.add_argument("--method", choices=("sum", "direct", "both"), default="sum")
    p = sub.add_parser("verify", parents=[common], help="run one or all identity checks")
    p.add_argument("kind", choices=(*verify.KINDS, "all"))
    p.add_argument("instance")
    p = sub.add_parser("corpus", parents=[common], help="seeded random corpus of checks")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--max-degree", type=int, default=5)
    p.add_argument("--max-s", type=int, default=2)
    return parser


_COMMANDS = {"mixed-table": _cmd_mixed_table, "mixed": _cmd_mixed, "rees": _cmd_rees,
             "verify": _cmd_verify}


def execute(args) -> tuple:
    """(report document, exit status)."""
    config = _config(args)
    if args.command == "corpus":
        prof = verify.CorpusProfile(args.max_dim, args.max_degree, args.max_s)
        # --workers sizes the process pool here; each check runs single-threaded
        inner = dataclasses.replace(config, workers=1)
        reports = [r.to_dict() for r in verify.run_corpus(args.seed, args.count, prof,
                                                          inner, args.workers)]
        verdict = _overall(reports)
        doc = {"inputs": {"seed": args.seed, "count": args.count,
                          "profile": {"max_dim": prof.max_dim, "max_degree": prof.max_degree,
                                      "max_s": prof.max_s}},
               "result": {"reports": reports,
                          "counts": {v: sum(r["verdict"] == v for r in reports)
                                     for v in (verify.PASS, verify.FAIL,
                                               verify.INAPPLICABLE, verify.ERROR)}},
               "provenance": {"config": config.to_dict()},
               "verdict": verdict}
        return doc, 0 if verdict == verify.PASS else 1
    inst = load_instance(args.instance)
    result, prov, verdict = _COMMANDS[args.command](inst, args, config)
    prov = dict(prov)
    prov["config"] = config.to_dict()
    doc = {"command": args.command, "inputs": inst.to_dict(), "result": result,
           "provenance": prov}
    if verdict is not None:
        doc["verdict"] = verdict
    return doc, 1 if verdict == verify.FAIL else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, status = execute(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MixmultError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = dumps(doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
