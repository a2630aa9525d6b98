"""Command-line client for the computation service.

Each subcommand builds the same pydantic request the HTTP endpoint takes,
dispatches it in-process (default) or POSTs it to a running service
(--url), and prints a CommandResult envelope.  Exit codes: 0 ok, 1 domain
failure (including an oracle mismatch), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request

from pydantic import ValidationError

from .arith import ParseError
from .service import schemas
from .service.handlers import HANDLERS, DomainError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _read_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit(result: schemas.CommandResult, args) -> None:
    text = result.model_dump_json(indent=2)
    if args.json_out and args.json_out != "-":
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _field_arg(args):
    if args.field is None:
        raise ParseError("missing --field specification")
    return json.loads(args.field)


def _request_dict(args):
    """Assemble the request payload from --json-in or per-command flags."""
    if args.json_in:
        return _read_json(args.json_in)
    cmd = args.command
    if cmd == "omega":
        if args.ring is None:
            raise ParseError("omega needs --ring or --json-in")
        return {"ring": json.loads(args.ring), "n": args.n, "k_max": args.k_max}
    if cmd in ("nf", "nu-check", "decompose"):
        if args.form is None:
            raise ParseError(f"{cmd} needs --form or --json-in")
        return {"field": _field_arg(args), "form": json.loads(args.form)}
    if cmd == "dsym":
        if args.symbols is None:
            raise ParseError("dsym needs --symbols or --json-in")
        return {"symbols": json.loads(args.symbols)}
    if cmd == "witt":
        req = {"p": args.p, "i": args.i, "e": args.e, "op": args.op}
        if args.a is None:
            raise ParseError("witt needs --a")
        req["a"] = json.loads(args.a)
        if args.b is not None:
            req["b"] = json.loads(args.b)
        return req
    if cmd == "hsym":
        return {"q": args.q, "i": args.i, "n": args.n}
    if cmd == "nu-basis":
        return {
            "field": _field_arg(args),
            "degree": args.degree,
            "degree_bound": args.degree_bound,
            "max_den_factors": args.max_den_factors,
        }
    if cmd == "solve-as":
        if args.g is None:
            raise ParseError("solve-as needs --g")
        return {
            "field": _field_arg(args),
            "g": args.g,
            "degree_bound": args.degree_bound,
        }
    raise ParseError(f"unknown command {cmd!r}")


def _dispatch_local(command, payload):
    model, handler = HANDLERS[command]
    request = model.model_validate(payload)
    response = handler(request)
    return response.model_dump(by_alias=True)


def _dispatch_remote(url, command, payload):
    endpoint = url.rstrip("/") + "/v1/" + command
    data = json.dumps(payload).encode()
    req = urllib.request.Request(
        endpoint, data=data, headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return json.loads(resp.read()), None
    except urllib.error.HTTPError as exc:
        body = exc.read().decode(errors="replace")
        try:
            parsed = json.loads(body)
        except json.JSONDecodeError:
            parsed = {"error": "HTTPError", "message": body}
        if exc.code == 422:
            raise ParseError(parsed.get("message", body))
        return None, DomainError(parsed.get("error", "HTTPError"), parsed.get("message", body))
    except urllib.error.URLError as exc:
        return None, DomainError("ServiceUnavailable", str(exc))


def _postprocess_exit(command, payload):
    """Domain conditions reported inside an ok payload."""
    if command in ("omega", "hsym") and payload.get("oracle_match") is False:
        return EXIT_DOMAIN, ["oracle mismatch: symbolic and standard presentations differ"]
    return EXIT_OK, []


def build_parser():
    parser = argparse.ArgumentParser(
        prog="logdiff", description="Exact char-p differential computations (JSON I/O)."
    )
    parser.add_argument("--url", help="POST to a running service instead of in-process")
    parser.add_argument("--seed", type=int, default=None, help="seed echoed in diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json-in", help="path to a full request JSON ('-' = stdin)")
        sp.add_argument("--json-out", help="where to write the result envelope")
        sp.add_argument("--field", help='field JSON, e.g. \'{"p":2,"vars":["t"]}\'')

    sp = sub.add_parser("omega", help="invariant factors of the differential module")
    common(sp)
    sp.add_argument("--ring", help='ring descriptor JSON, e.g. \'{"family":"truncated","p":2,"n":2}\'')
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k-max", dest="k_max", type=int, default=3)

    for name, helptext in [
        ("nf", "canonical form modulo exact forms"),
        ("nu-check", "membership in the logarithmic kernel"),
        ("decompose", "decompose a kernel form into dlog symbols"),
    ]:
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--form", help="form JSON")

    sp = sub.add_parser("dsym", help="differential symbol of a Milnor symbol sum")
    common(sp)
    sp.add_argument("--symbols", help="symbol JSON")

    sp = sub.add_parser("witt", help="Witt vector arithmetic")
    common(sp)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--i", type=int, default=1)
    sp.add_argument("--e", type=int, default=1)
    sp.add_argument("--op", default="add",
                    choices=["add", "mul", "sub", "frobenius", "verschiebung"])
    sp.add_argument("--a", help="components JSON, e.g. '[1,0]'")
    sp.add_argument("--b", help="components JSON for binary ops")

    sp = sub.add_parser("hsym", help="presented symbol group over a finite field")
    common(sp)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--i", type=int, default=1)
    sp.add_argument("--n", type=int, default=1)

    sp = sub.add_parser("nu-basis", help="basis of the truncated logarithmic kernel")
    common(sp)
    sp.add_argument("--degree", type=int, default=1)
    sp.add_argument("--degree-bound", dest="degree_bound", type=int, required=False, default=1)
    sp.add_argument("--max-den-factors", dest="max_den_factors", type=int, default=1)

    sp = sub.add_parser("solve-as", help="bounded Artin-Schreier solve a^p - a = g")
    common(sp)
    sp.add_argument("--g", help="right-hand side, rational-function text")
    sp.add_argument("--degree-bound", dest="degree_bound", type=int, default=2)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    diagnostics = []
    if args.seed is not None:
        diagnostics.append(f"seed={args.seed}")
    try:
        payload_in = _request_dict(args)
        if args.url:
            payload, domain_err = _dispatch_remote(args.url, args.command, payload_in)
            if domain_err is not None:
                raise domain_err
        else:
            payload = _dispatch_local(args.command, payload_in)
    except (ParseError, ValidationError, json.JSONDecodeError, ValueError) as exc:
        result = schemas.CommandResult(
            status="error",
            payload={"error": type(exc).__name__, "message": str(exc)},
            diagnostics=diagnostics,
        )
        _emit(result, args)
        return EXIT_USAGE
    except DomainError as exc:
        result = schemas.CommandResult(
            status="error",
            payload={"error": exc.code, "message": str(exc)},
            diagnostics=diagnostics,
        )
        _emit(result, args)
        return EXIT_DOMAIN
    code, notes = _postprocess_exit(args.command, payload)
    diagnostics.extend(notes)
    result = schemas.CommandResult(status="ok", payload=payload, diagnostics=diagnostics)
    _emit(result, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
