#!/usr/bin/env python3
"""Extract LAN game transcripts from a LaTeX-flavoured markdown document.

Usage: extract_corpus_games.py SOURCE.md OUT_GAMES OUT_EXCLUSIONS

A game is a `\\paragraph{Game <id>: ...}` block closed by its
`\\hfill \\textbf{<result>}` line. Move text comes from lines opening with
`\\move{n}`, `\\blackmove{n}` or `n.`; `\\fenboard{...}` diagrams become
checkpoints on the board reached so far (their side-to-move and counter
fields are unreliable and dropped). Games in SAN, games not starting
from move 1, games without a result and combined-rule games are excluded.
Identical move lists are kept once.
"""

import re
import sys

VARIANTS = [
    ("no-castling (10)", "nocastling10"),
    ("no-castling", "nocastling"),
    ("self-capture", "selfcapture"),
    ("stalemate=win", "stalematewin"),
    ("pawn-back", "pawnback"),
    ("pawn-sideways", "pawnsideways"),
    ("pawn sideways", "pawnsideways"),
    ("pawn-one-square", "pawnonesquare"),
    ("pawn one square", "pawnonesquare"),
    ("semi-torpedo", "semitorpedo"),
    ("torpedo", "torpedo"),
]

GAME_RE = re.compile(r"\\paragraph\{Game ([^:]+):\s*(.*)")
RESULT_RE = re.compile(r"\\hfill\s*\\textbf\{([^}]*)\}")
FEN_RE = re.compile(r"\\fenboard\{([^}]*)\}")
MOVE_LINE_RE = re.compile(r"^\s*(\\move\{|\\blackmove\{|\d+\.)")
LAN_RE = re.compile(r"^[a-h][1-8][a-h][1-8][qrbn]?$")
NUMBER_RE = re.compile(r"^\d+\.(\.\.)?$")
SAN_RE = re.compile(
    r"^(O-O(-O)?|0-0(-0)?|[KQRBN][a-h]?[1-8]?x?[a-h][1-8](=?[QRBN])?|[a-h](x[a-h])?[1-8](=?[QRBN])?)[+#]?[!?]*$"
)
RESULTS = {"1/2--1/2": "1/2-1/2", "1--0": "1-0", "0--1": "0-1"}


def variant_of(title):
    """Variant named in 'AlphaZero <name> vs AlphaZero <name>', else None."""
    m = re.match(r"AlphaZero (.+?) vs AlphaZero (.+?)(\\footnote|\}|$)", title)
    if not m or m.group(1).strip() != m.group(2).strip():
        return None
    name = m.group(1).strip().lower()
    for label, vid in VARIANTS:
        if name == label:
            return vid
    return None


def tokens(line):
    line = re.sub(r"\\textcolor\{gray\}\{\\emph\{\(book\) \}\}", " ", line)
    line = line.replace("{ book }", " ")
    line = re.sub(r"\\specialmove\{([^}]*)\}", r"\1", line)
    line = re.sub(r"\\blackmove\{(\d+)\}", r" \1... ", line)
    line = re.sub(r"\\move\{(\d+)\}", r" \1. ", line)
    line = re.sub(r"(\d+)\.\.\.", r" \1... ", line)
    return line.split()


def parse_block(lines):
    """Returns (moves, checkpoints, result, first_number, problem)."""
    moves, checks, result, first, started = [], [], None, None, False
    for raw in lines:
        if "\\gamedrawn" in raw:
            result = "1/2-1/2"
            break
        r = RESULT_RE.search(raw)
        if r:
            result = RESULTS.get(r.group(1).strip())
            if result is None:
                return None, None, None, None, "unrecognised result " + r.group(1)
            break
        f = FEN_RE.search(raw)
        if f:
            fields = f.group(1).split()
            # A second diagram at the same ply illustrates a side line.
            if started and (not checks or checks[-1][0] != len(moves)):
                checks.append((len(moves), fields[0]))
            continue
        if not MOVE_LINE_RE.match(raw):
            continue
        for tok in tokens(raw):
            if NUMBER_RE.match(tok):
                if first is None:
                    first = tok
                n = int(tok.rstrip("."))
                expected = 2 * (n - 1) + (1 if tok.endswith("...") else 0)
                if moves and len(moves) != expected:
                    return None, None, None, None, "move numbering breaks at %s" % tok
                continue
            tok = tok.rstrip(",;:.")
            if tok in ("1-0", "0-1", "1/2-1/2"):
                result = tok
                continue
            if tok == "--":
                break
            if SAN_RE.match(tok):
                return None, None, None, None, "SAN move '%s'" % tok
            if not LAN_RE.match(tok):
                # Prose after the moves runs to the end of the line.
                break
            started = True
            moves.append(tok)
    if first != "1.":
        return None, None, None, None, "does not start from move 1"
    if result is None:
        return None, None, None, None, "no stated result"
    if not moves:
        return None, None, None, None, "no moves"
    return moves, checks, result, first, None


def main(src, out_games, out_excl):
    text = open(src, encoding="utf-8").read().splitlines()
    starts = [i for i, l in enumerate(text) if GAME_RE.search(l)]
    games, excluded, seen = [], [], set()
    for k, start in enumerate(starts):
        end = starts[k + 1] if k + 1 < len(starts) else len(text)
        # A block also ends at the next sectioning command.
        for j in range(start + 1, end):
            if re.match(r"\\(sub)*section", text[j]):
                end = j
                break
        gid, title = GAME_RE.search(text[start]).groups()
        line_no = start + 1
        variant = variant_of(title)
        if variant is None:
            excluded.append((gid, line_no, "title names no single variant"))
            continue
        moves, checks, result, _, problem = parse_block(text[start + 1 : end])
        if problem:
            excluded.append((gid, line_no, problem))
            continue
        key = (variant, tuple(moves))
        if key in seen:
            excluded.append((gid, line_no, "duplicate transcript"))
            continue
        seen.add(key)
        games.append((gid, line_no, variant, result, moves, checks))

    with open(out_games, "w", encoding="utf-8", newline="\n") as f:
        f.write("# game <id> <variant> <result> <source line>\n")
        f.write("# check <moves played> <board>\n")
        for gid, line_no, variant, result, moves, checks in games:
            f.write("game %s %s %s %d\n" % (gid, variant, result, line_no))
            f.write("moves %s\n" % " ".join(moves))
            for n, board in checks:
                f.write("check %d %s\n" % (n, board))
            f.write("end\n")
    with open(out_excl, "w", encoding="utf-8", newline="\n") as f:
        f.write("# <id> <source line>: reason\n")
        for gid, line_no, why in excluded:
            f.write("%s %d: %s\n" % (gid, line_no, why))
    print("%d games, %d excluded" % (len(games), len(excluded)))


if __name__ == "__main__":
    if len(sys.argv) != 4:
        sys.exit(__doc__)
    main(*sys.argv[1:])
