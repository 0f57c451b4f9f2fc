"""Command-line entry points for the fusion-games workbench."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import nullgame, pcgame, unfolded
from .automata import TreeAutomaton, ZOO, escape_point
from .engine import ADAM, EVE, simulate, solve_bounded, to_move
from .oracles import ORACLES, dichotomy
from .service import SessionStore, create_app, move_to_wire
from .unfolded import LabeledTree
from .words import ClopenSet


def _automaton(spec: str) -> TreeAutomaton:
    if spec in ZOO:
        return ZOO[spec]
    path = Path(spec)
    text = path.read_text()
    if path.suffix == ".json":
        return TreeAutomaton.from_json(json.loads(text))
    return TreeAutomaton.from_text(text)


def _labeled_tree(spec: str) -> LabeledTree:
    if spec in ZOO:
        return unfolded.constant_labels(ZOO[spec])
    return LabeledTree.from_text(Path(spec).read_text())


def _frac(x) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def cmd_measure(args) -> int:
    if args.clopen:
        c = ClopenSet.from_words(json.loads(args.clopen))
        print(_frac(c.measure(base=args.base)))
        return 0
    t = _automaton(args.set)
    print(_frac(t.branch_measure()))
    return 0


def cmd_member(args) -> int:
    oracle = ORACLES[args.ideal]
    t = _automaton(args.set)
    verdict = oracle.member(t)
    print(json.dumps({"ideal": oracle.name, "member": verdict}))
    return 0


def cmd_kernel(args) -> int:
    oracle = ORACLES[args.ideal]
    from .oracles import kernel

    k = kernel(_automaton(args.set), oracle)
    sys.stdout.write(k.to_text())
    return 0


def cmd_dichotomy(args) -> int:
    oracle = ORACLES[args.ideal]
    result = dichotomy(oracle, _automaton(args.set))
    print(json.dumps(result.to_json()))
    return 0


def cmd_escape(args) -> int:
    oracle = ORACLES[args.ideal]
    t = _automaton(args.set)
    avoid = [_automaton(s) for s in args.avoid.split(",")] if args.avoid else []
    p = escape_point(t, avoid, oracle)
    print(json.dumps({"prefix": p.prefix, "period": p.period}))
    return 0


def cmd_solve(args) -> int:
    tree = nullgame.surrogate_tree(_automaton(args.target), args.rounds, args.cap)
    winner, _strategy = solve_bounded(tree)
    print(json.dumps({"winner": winner, "rounds": args.rounds, "generator_cap": args.cap}))
    return 0


class _TraceWriter:
    def __init__(self, path: str | None):
        self.fh = open(path, "w") if path else None

    def emit(self, round_no: int, player: str, move) -> None:
        if self.fh:
            self.fh.write(json.dumps(
                {"round": round_no, "player": player, "move": move_to_wire(move)}) + "\n")

    def close(self):
        if self.fh:
            self.fh.close()


def _run_play(scheme, adam, eve, rounds, trace_path, describe) -> int:
    trace = _TraceWriter(trace_path)
    play = ()
    try:
        for n in range(1, rounds + 1):
            for responder in (adam, eve):
                move = responder(play)
                violation = scheme.validate(play, move)
                if violation is not None:
                    print(f"illegal move at round {n} ({to_move(play)}): {violation}")
                    return 1
                trace.emit(n, to_move(play), move)
                play = play + (move,)
            print(describe(n, play))
    finally:
        trace.close()
    return 0


def _interactive_word(play) -> str:
    prompt = f"round {len(play) // 2 + 1}, your word: "
    return input(prompt).strip()


def _interactive_clopen(play) -> ClopenSet:
    raw = input(f"round {len(play) // 2 + 1}, clopen words (comma separated, empty for ∅): ")
    words = [w.strip() for w in raw.split(",") if w.strip()]
    return ClopenSet.from_words(words)


def cmd_play_e(args) -> int:
    covers = [_automaton(s) for s in args.covers.split(",")] if args.covers else []
    eve = nullgame.eve_synthesize(covers)
    target = TreeAutomaton.empty()
    for c in covers:
        target = target.combine(c, "union")

    if args.interactive:
        adam = _interactive_word
    else:
        def adam(play):
            xi = nullgame.adam_word(play)
            for b in ("0", "1"):
                if target.word_in_tree(xi + b):
                    return xi + b
            return xi + "0"

    def describe(n, play):
        status = nullgame.payoff_status(play, target)
        c = play[-1]
        return (f"round {n}: xi={play[-2]!r} C={c.sorted_words()} "
                f"mu_rel={_frac(c.measure(base=play[-2]))} status={status.kind}"
                + (f"(since {status.since})" if status.since else ""))

    return _run_play(nullgame.scheme(), adam, eve, args.depth, args.trace, describe)


def cmd_play_pc(args) -> int:
    maps = [pcgame.MonotoneMap.from_json(m) for m in json.loads(Path(args.decomposition).read_text())]
    eve = pcgame.eve_synthesize(maps)
    target = _automaton(args.target)
    g = pcgame.count_ones_oracle() if args.function == "count-ones" else pcgame.identity_oracle()

    adam = _interactive_word if args.interactive else (
        lambda play: pcgame.adam_word(play) + "0")

    def describe(n, play):
        status = pcgame.payoff_status(play, target, g)
        published = sum(1 for m in play[-1] if not m.is_empty())
        return (f"round {n}: xi={play[-2]!r} pieces={published} status={status.kind}"
                + (f"(piece {status.piece}, depth {status.depth})"
                   if status.kind == "EVE_AGREEING" else ""))

    return _run_play(pcgame.scheme(), adam, eve, args.depth, args.trace, describe)


def cmd_play_unfolded(args) -> int:
    tree = _labeled_tree(args.tree)
    oracle = ORACLES[args.ideal]
    covers = [_automaton(s) for s in args.covers.split(",")] if args.covers else []

    if args.human_side == ADAM:
        adam = _interactive_word_node(tree) if args.interactive else _demo_adam(tree)
        eve = unfolded.eve_counterplay(covers, tree=tree, oracle=oracle)
    else:
        adam = unfolded.adam_synthesize(tree, oracle)
        eve = _interactive_clopen if args.interactive else (lambda play: ClopenSet.full())

    def describe(n, play):
        columns = unfolded.column_status(play)
        escaped = sorted(k for k, v in columns.items() if v.escaped)
        return (f"round {n}: digits={unfolded.digits(unfolded.adam_node(play))!r} "
                f"O={play[-1].sorted_words()} escaped columns={escaped}")

    return _run_play(unfolded.scheme(tree, oracle), adam, eve, args.depth,
                     args.trace, describe)


def _demo_adam(tree):
    def respond(play):
        prev = unfolded.adam_node(play)
        state = tree.walk(prev)
        succ = tree.successors(state)
        b, y, _ = succ[0]
        return prev + ((b, y),)

    return respond


def _interactive_word_node(tree):
    def respond(play):
        raw = input(f"round {len(play) // 2 + 1}, node steps 'bit:label,...': ")
        prev = unfolded.adam_node(play)
        for part in raw.split(","):
            bit, _, label = part.strip().partition(":")
            prev = prev + ((int(bit), label),)
        return prev

    return respond


def cmd_serve(args) -> int:
    import uvicorn

    app = create_app(SessionStore())
    if args.ui:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.ui, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="fusiongames")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="exact measure of a closed regular set or clopen set")
    p.add_argument("set", nargs="?", default="FULL")
    p.add_argument("--clopen", help="JSON array of generator words")
    p.add_argument("--base", default=None)
    p.set_defaults(fn=cmd_measure)

    p = sub.add_parser("member", help="closed-set ideal membership")
    p.add_argument("--ideal", required=True, choices=sorted(ORACLES))
    p.add_argument("set")
    p.set_defaults(fn=cmd_member)

    p = sub.add_parser("kernel", help="largest ideal-perfect closed subset")
    p.add_argument("--ideal", required=True, choices=sorted(ORACLES))
    p.add_argument("set")
    p.set_defaults(fn=cmd_kernel)

    p = sub.add_parser("dichotomy", help="member certificate or perfect kernel")
    p.add_argument("--ideal", required=True, choices=sorted(ORACLES))
    p.add_argument("set")
    p.set_defaults(fn=cmd_dichotomy)

    p = sub.add_parser("escape", help="eventually periodic point avoiding small sets")
    p.add_argument("set")
    p.add_argument("--avoid", default="")
    p.add_argument("--ideal", default="E", choices=sorted(ORACLES))
    p.set_defaults(fn=cmd_escape)

    p = sub.add_parser("solve", help="bounded backward-induction value of the null-game surrogate")
    p.add_argument("--target", required=True)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--cap", type=int, default=9)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("play-e", help="play the closed-null game")
    p.add_argument("--covers", default="")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--interactive", action="store_true")
    p.add_argument("--trace")
    p.set_defaults(fn=cmd_play_e)

    p = sub.add_parser("play-pc", help="play the piecewise-continuity game")
    p.add_argument("--decomposition", required=True)
    p.add_argument("--target", default="FULL")
    p.add_argument("--function", default="identity", choices=["identity", "count-ones"])
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--interactive", action="store_true")
    p.add_argument("--trace")
    p.set_defaults(fn=cmd_play_pc)

    p = sub.add_parser("play-unfolded", help="play the unfolded fusion game")
    p.add_argument("--tree", required=True)
    p.add_argument("--ideal", default="E", choices=sorted(ORACLES))
    p.add_argument("--covers", default="")
    p.add_argument("--human-side", default=ADAM, choices=[ADAM, EVE])
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--interactive", action="store_true")
    p.add_argument("--trace")
    p.set_defaults(fn=cmd_play_unfolded)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--ui", help="static directory with the browser board")
    p.set_defaults(fn=cmd_serve)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
