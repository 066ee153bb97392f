"""Command-line front end.

A thin client over the HTTP service: by default the requests are routed
in-process (no server needed); pass --url to talk to a remote instance.

Exit codes: 0 all tasks succeeded, 1 some task errored, 2 bad input or
configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx


def _client(url: str | None) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=600.0)
    # in-process transport: same requests, no socket
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app
    return TestClient(app)


def _apply_overrides(doc: dict, args) -> dict:
    policy = dict(doc.get("policy") or {})
    for flag, key in (("trunc_base", "base"), ("buffer", "buffer"),
                      ("window", "window"), ("cap", "cap"),
                      ("seed", "seed"), ("trials", "trials")):
        value = getattr(args, flag, None)
        if value is not None:
            policy[key] = value
    if policy:
        doc["policy"] = policy
    if getattr(args, "p", None) is not None:
        ring = dict(doc.get("ring") or {})
        ring["p"] = args.p
        doc["ring"] = ring
    return doc


def _write_out(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        print(text)


def cmd_run(args) -> int:
    try:
        with open(args.problem) as fh:
            doc = json.load(fh)
    except OSError as exc:
        print(f"cannot read problem file: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"problem file is not valid JSON: {exc}", file=sys.stderr)
        return 2
    doc = _apply_overrides(doc, args)
    with _client(args.url) as client:
        resp = client.post("/run", json=doc)
    if resp.status_code == 422:
        detail = resp.json()
        print(f"problem rejected: {detail.get('detail', detail)}",
              file=sys.stderr)
        return 2
    if resp.status_code != 200:
        print(f"service error {resp.status_code}: {resp.text}",
              file=sys.stderr)
        return 2
    payload = resp.json()
    from .problems import dumps_bundle
    _write_out(dumps_bundle(payload["bundle"]), args.out)
    return payload["exit_code"]


def cmd_fixture(args) -> int:
    params = {}
    for item in args.param or []:
        if "=" not in item:
            print(f"bad --param '{item}', need key=value", file=sys.stderr)
            return 2
        key, value = item.split("=", 1)
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    body = {"kind": args.kind, "params": params,
            "seed": args.seed if args.seed is not None else 0}
    with _client(args.url) as client:
        resp = client.post("/fixture", json=body)
    if resp.status_code != 200:
        detail = resp.json() if resp.headers.get(
            "content-type", "").startswith("application/json") else resp.text
        print(f"fixture rejected: {detail}", file=sys.stderr)
        return 2
    doc = resp.json()["problem"]
    _write_out(json.dumps(doc, sort_keys=True, indent=1), args.out)
    return 0


def cmd_health(args) -> int:
    with _client(args.url) as client:
        resp = client.get("/health")
    print(resp.text)
    return 0 if resp.status_code == 200 else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsplit",
        description="Hilbert coefficients, Tor-length invariants and "
                    "T-split extension classes over local rings")
    parser.add_argument("--url", help="remote service URL "
                        "(default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a JSON problem file")
    run_p.add_argument("problem", help="path to the problem file")
    run_p.add_argument("--out", help="write the report bundle here")
    run_p.add_argument("--p", type=int, help="override the prime modulus")
    run_p.add_argument("--seed", type=int, help="override the master seed")
    run_p.add_argument("--trunc-base", dest="trunc_base", type=int,
                       help="first truncation level")
    run_p.add_argument("--buffer", type=int, help="truncation buffer")
    run_p.add_argument("--window", type=int, help="stabilization window")
    run_p.add_argument("--cap", type=int, help="level sweep cap")
    run_p.add_argument("--trials", type=int, help="Monte-Carlo trials")
    run_p.set_defaults(func=cmd_run)

    fix_p = sub.add_parser("fixture", help="emit a family problem file")
    fix_p.add_argument("kind",
                       choices=["hypersurface-sci", "ulrich-dim1", "rci"])
    fix_p.add_argument("--param", action="append",
                       help="family parameter key=value (JSON values ok)")
    fix_p.add_argument("--seed", type=int, default=0)
    fix_p.add_argument("--out", help="write the problem file here")
    fix_p.set_defaults(func=cmd_fixture)

    health_p = sub.add_parser("health", help="ping the service")
    health_p.set_defaults(func=cmd_health)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code = args.func(args)
    sys.exit(code)


if __name__ == "__main__":
    main()
