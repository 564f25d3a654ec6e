"""``qicsel`` command line. Builds the same requests the HTTP service accepts and
either handles them in-process or posts them to ``--server``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from . import service
from .errors import InputError, QicselError
from .models import (
    BuildQicRequest,
    CountsModel,
    CouplingModel,
    DriftModel,
    LayoutsRequest,
    NoiseModel,
    PartitionRequest,
    QicModel,
    ReportRequest,
    ScoreRequest,
    SelectRequest,
    SimulateRequest,
)

ROUTES = {
    "build-qic": ("/qic", BuildQicRequest, service.handle_build_qic),
    "layouts": ("/layouts", LayoutsRequest, service.handle_layouts),
    "partition": ("/partition", PartitionRequest, service.handle_partition),
    "simulate": ("/simulate", SimulateRequest, service.handle_simulate),
    "score": ("/score", ScoreRequest, service.handle_score),
    "select": ("/select", SelectRequest, service.handle_select),
    "report": ("/report", ReportRequest, service.handle_report),
}


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _circuit_fields(args) -> dict:
    if not args.circuit:
        return {}
    path = Path(args.circuit)
    if not path.is_file():
        raise InputError(f"no such file: {args.circuit}")
    if path.suffix.lower() == ".qasm":
        return {"qasm": path.read_text()}
    return {"circuit": _read_json(args.circuit)}


def _coupling(args):
    if Path(args.coupling).is_file():
        return CouplingModel(**_read_json(args.coupling))
    return args.coupling


def _noise(args):
    source = args.drift or args.noise
    if source is None:
        return None
    if Path(source).is_file():
        data = _read_json(source)
        return DriftModel(**data) if "snapshots" in data else NoiseModel(**data)
    return source


def _ints(text: str | None) -> list[int] | None:
    if text is None:
        return None
    return [int(t) for t in text.replace(",", " ").split()]


def build_request(args):
    cmd = args.command
    common = _circuit_fields(args)
    if cmd == "build-qic":
        return BuildQicRequest(**common)
    if cmd == "layouts":
        return LayoutsRequest(**common, coupling=_coupling(args))
    if cmd == "partition":
        return PartitionRequest(**common, coupling=_coupling(args), mode=args.mode, threshold=args.threshold,
                                seed=args.seed, permutations=args.permutations)
    if cmd == "simulate":
        if _noise(args) is None:
            raise InputError("simulate needs --noise or --drift")
        qic = QicModel(**_read_json(args.qic)) if args.qic else None
        return SimulateRequest(**common, qic=qic, coupling=_coupling(args), layout=_ints(args.layout),
                               noise=_noise(args), time=args.time, shots=args.shots, seed=args.seed)
    if cmd == "score":
        counts = CountsModel(**_read_json(args.counts)) if args.counts else None
        return ScoreRequest(**common, counts=counts, ordering=_ints(args.ordering), resamples=args.resamples,
                            seed=args.seed, coupling=_coupling(args), noise=_noise(args), time=args.time)
    if cmd == "select":
        if _noise(args) is None:
            raise InputError("select needs --noise or --drift")
        return SelectRequest(**common, coupling=_coupling(args), noise=_noise(args), mode=args.mode,
                             threshold=args.threshold, shots=args.shots, seed=args.seed,
                             permutations=args.permutations, jit_baseline=args.jit_baseline,
                             current_time=args.current_time, stale_time=args.stale_time)
    if cmd == "report":
        plan_counts = _read_json(args.counts) if args.counts else None
        return ReportRequest(plan_counts=plan_counts, widths=_ints(args.widths), coupling=_coupling(args),
                             threshold=args.threshold, seed=args.seed, permutations=args.permutations,
                             jit_baseline=args.jit_baseline)
    raise InputError(f"unknown command {cmd}")


def _to_csv(cmd: str, result: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    if cmd == "layouts":
        w.writerow(["index", "layout"])
        for i, l in enumerate(result["layouts"]):
            w.writerow([i, " ".join(map(str, l))])
    elif cmd == "simulate":
        w.writerow(["bitstring", "count"])
        for k, v in result["counts"].items():
            w.writerow([k, v])
    elif cmd == "partition":
        totals = {tuple(d["layout"]): d["total"] for d in result["distortion"]}
        w.writerow(["set_index", "layout", "distortion"])
        for i, s in enumerate(result["sets"]):
            for l in s:
                w.writerow([i, " ".join(map(str, l)), totals.get(tuple(l), 0)])
    else:
        raise InputError(f"CSV output is not available for {cmd}")
    return buf.getvalue()


def _run_local(cmd: str, request, fmt: str) -> str:
    result = ROUTES[cmd][2](request)
    if hasattr(result, "to_dict"):
        return result.to_csv() if fmt == "csv" else json.dumps(result.to_dict(), indent=2)
    return _to_csv(cmd, result) if fmt == "csv" else json.dumps(result, indent=2)


def _run_remote(cmd: str, request, fmt: str, server: str) -> str:
    import httpx

    route = ROUTES[cmd][0]
    native_csv = cmd in ("select", "report")
    params = {"format": fmt} if native_csv else None
    try:
        resp = httpx.post(server.rstrip("/") + route, json=request.model_dump(mode="json", exclude_none=True),
                          params=params, timeout=None)
    except httpx.HTTPError as exc:
        raise QicselError(f"cannot reach {server}: {exc}") from None
    if resp.status_code >= 400:
        try:
            body = resp.json()
        except ValueError:
            body = {"detail": resp.text}
        err = QicselError(body.get("detail", resp.text))
        err.exit_code = int(body.get("exit_code", 2 if resp.status_code < 500 else 1))
        raise err
    if native_csv and fmt == "csv":
        return resp.text
    data = resp.json()
    return _to_csv(cmd, data) if fmt == "csv" else json.dumps(data, indent=2)


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qicsel", description="Noise-aware layout selection with Quality Indicator Circuits.")
    p.add_argument("--server", help="base URL of a running qicsel service; default runs in-process")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--circuit", help="circuit JSON or .qasm file")
        sp.add_argument("--coupling", default="heavy-hex-27", help="fixture name or coupling-map JSON file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write output to FILE instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        return sp

    def noise_flags(sp):
        sp.add_argument("--noise", help="noise JSON file, 'uniform:P1,P2,PM' or 'random:SEED'")
        sp.add_argument("--drift", help="drift-schedule JSON file")

    def partition_flags(sp):
        sp.add_argument("--mode", choices=("basic", "disjoint", "distortion"), default="distortion")
        sp.add_argument("--threshold", type=int, default=1)
        sp.add_argument("--permutations", type=int, default=20)

    add("build-qic", "build the QIC of a circuit")
    add("layouts", "enumerate isomorphic layouts")
    partition_flags(add("partition", "batch layouts into union-QIC executions"))

    sp = add("simulate", "run a QIC under noise and print the shot histogram")
    noise_flags(sp)
    sp.add_argument("--qic", help="QIC JSON file with physical qubit labels")
    sp.add_argument("--layout", help="physical qubits for virtual 0..n-1, e.g. '18,21,23'")
    sp.add_argument("--time", type=float, help="drift time to simulate at (default: last snapshot)")
    sp.add_argument("--shots", type=int, default=4096)

    sp = add("score", "QIC scores of a histogram, or Mapomatic scores of all layouts")
    noise_flags(sp)
    sp.add_argument("--counts", help="counts JSON file")
    sp.add_argument("--ordering", help="bitstring positions forming the ZZ chain")
    sp.add_argument("--resamples", type=int, default=0, help="bootstrap resamples (0: none)")
    sp.add_argument("--time", type=float, help="drift time for Mapomatic scoring (default: first snapshot)")

    sp = add("select", "rank layouts end to end")
    noise_flags(sp)
    partition_flags(sp)
    sp.add_argument("--shots", type=int, default=4096)
    sp.add_argument("--jit-baseline", type=int, default=132)
    sp.add_argument("--current-time", type=float)
    sp.add_argument("--stale-time", type=float)

    sp = add("report", "compare execution counts against the JIT baseline")
    sp.add_argument("--counts", help="JSON {label: executions} or {mode: {label: executions}}")
    sp.add_argument("--widths", help="QAOA path widths to partition on --coupling, e.g. '6,10,14'")
    sp.add_argument("--threshold", type=int, default=1)
    sp.add_argument("--permutations", type=int, default=20)
    sp.add_argument("--jit-baseline", type=int, default=132)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("qicsel.api:app", host=args.host, port=args.port)
        return 0
    try:
        request = build_request(args)
        if args.server:
            text = _run_remote(args.command, request, args.format, args.server)
        else:
            text = _run_local(args.command, request, args.format)
    except ValidationError as exc:
        print(f"qicsel: invalid input: {exc}", file=sys.stderr)
        return 2
    except QicselError as exc:
        print(f"qicsel: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
