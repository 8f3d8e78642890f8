//! Slow reference move generator on a plain 8x8 array.
//!
//! Shares no code with the library: it reads FEN text itself, generates
//! every pseudo-legal move by walking offsets, plays each on a copy and
//! discards those that leave the mover's king attacked. Moves are reported
//! as sorted LAN strings.

#![allow(dead_code)]

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NPiece {
    pub white: bool,
    pub kind: char, // one of p n b r q k
}

#[derive(Clone, Debug)]
pub struct NState {
    /// `board[rank][file]`, rank 0 is White's back rank.
    pub board: [[Option<NPiece>; 8]; 8],
    pub white_to_move: bool,
    /// K, Q, k, q
    pub castle: [bool; 4],
    /// Skipped square and the square of the piece that can be taken there.
    pub ep: Option<((i32, i32), (i32, i32))>,
    pub plies: u32,
    pub variant: String,
}

#[derive(Clone, Debug)]
pub struct NMove {
    pub from: (i32, i32),
    pub to: (i32, i32),
    pub promo: Option<char>,
    pub ep_capture: bool,
    pub castle_rook: Option<((i32, i32), (i32, i32))>,
    pub double: bool,
}

impl NMove {
    pub fn lan(&self) -> String {
        let sq = |(f, r): (i32, i32)| format!("{}{}", (b'a' + f as u8) as char, r + 1);
        let mut s = format!("{}{}", sq(self.from), sq(self.to));
        if let Some(p) = self.promo {
            s.push(p);
        }
        s
    }
}

const KNIGHT: [(i32, i32); 8] = [(1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)];
const KING: [(i32, i32); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
const ROOK_DIRS: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const BISHOP_DIRS: [(i32, i32); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

fn on_board(f: i32, r: i32) -> bool {
    (0..8).contains(&f) && (0..8).contains(&r)
}

fn parse_sq(s: &str) -> (i32, i32) {
    let b = s.as_bytes();
    ((b[0] - b'a') as i32, (b[1] - b'1') as i32)
}

impl NState {
    pub fn from_fen(fen: &str) -> NState {
        let parts: Vec<&str> = fen.split_whitespace().collect();
        let mut board = [[None; 8]; 8];
        for (i, row) in parts[0].split('/').enumerate() {
            let r = 7 - i;
            let mut f = 0;
            for c in row.chars() {
                if let Some(d) = c.to_digit(10) {
                    f += d as usize;
                } else {
                    board[r][f] = Some(NPiece {
                        white: c.is_ascii_uppercase(),
                        kind: c.to_ascii_lowercase(),
                    });
                    f += 1;
                }
            }
        }
        let white_to_move = parts[1] == "w";
        let c = parts[2];
        let castle = [c.contains('K'), c.contains('Q'), c.contains('k'), c.contains('q')];
        let ep = if parts[3] == "-" {
            None
        } else {
            let t = parse_sq(parts[3]);
            // The pushed piece stands one step beyond the skipped square.
            let dir = if white_to_move { -1 } else { 1 };
            Some((t, (t.0, t.1 + dir)))
        };
        let mut variant = "classical".to_string();
        let fullmove: u32 = parts.get(5).and_then(|s| s.parse().ok()).unwrap_or(1);
        let mut plies = 2 * (fullmove - 1) + u32::from(!white_to_move);
        for extra in parts.iter().skip(6) {
            if let Some(v) = extra.strip_prefix("variant=") {
                variant = v.to_string();
            }
            if let Some(v) = extra.strip_prefix("plies=") {
                plies = v.parse().unwrap();
            }
        }
        let mut st = NState {
            board,
            white_to_move,
            castle,
            ep,
            plies,
            variant,
        };
        // Rights without king and rook at home are void.
        let home = [((4, 0), (7, 0), true), ((4, 0), (0, 0), true), ((4, 7), (7, 7), false), ((4, 7), (0, 7), false)];
        for (i, (k, r, w)) in home.iter().enumerate() {
            let ok_k = st.at(k.0, k.1) == Some(NPiece { white: *w, kind: 'k' });
            let ok_r = st.at(r.0, r.1) == Some(NPiece { white: *w, kind: 'r' });
            if !(ok_k && ok_r) {
                st.castle[i] = false;
            }
        }
        st
    }

    pub fn at(&self, f: i32, r: i32) -> Option<NPiece> {
        self.board[r as usize][f as usize]
    }

    fn set(&mut self, f: i32, r: i32, p: Option<NPiece>) {
        self.board[r as usize][f as usize] = p;
    }

    fn double_push_allowed(&self, white: bool, r: i32) -> bool {
        let rel = if white { r } else { 7 - r };
        match self.variant.as_str() {
            "pawnonesquare" => false,
            // Two squares forward from anywhere the destination exists.
            "torpedo" => rel + 2 <= 7,
            "semitorpedo" => rel == 1 || rel == 2,
            _ => rel == 1,
        }
    }

    fn can_self_capture(&self) -> bool {
        self.variant == "selfcapture"
    }

    /// Can a piece of the mover land on (f, r)?
    fn landing_ok(&self, white: bool, f: i32, r: i32) -> bool {
        match self.at(f, r) {
            None => true,
            Some(p) if p.white != white => true,
            Some(p) => self.can_self_capture() && p.kind != 'k',
        }
    }

    /// Whether any piece of colour `by_white` attacks (f, r).
    pub fn attacked(&self, f: i32, r: i32, by_white: bool) -> bool {
        for rr in 0..8 {
            for ff in 0..8 {
                let Some(p) = self.at(ff, rr) else { continue };
                if p.white != by_white {
                    continue;
                }
                let (df, dr) = (f - ff, r - rr);
                let hit = match p.kind {
                    'p' => {
                        let dir = if p.white { 1 } else { -1 };
                        dr == dir && df.abs() == 1
                    }
                    'n' => KNIGHT.contains(&(df, dr)),
                    'k' => KING.contains(&(df, dr)),
                    'b' => self.slides_to(ff, rr, f, r, &BISHOP_DIRS),
                    'r' => self.slides_to(ff, rr, f, r, &ROOK_DIRS),
                    'q' => self.slides_to(ff, rr, f, r, &BISHOP_DIRS) || self.slides_to(ff, rr, f, r, &ROOK_DIRS),
                    _ => unreachable!(),
                };
                if hit {
                    return true;
                }
            }
        }
        false
    }

    fn slides_to(&self, f0: i32, r0: i32, f: i32, r: i32, dirs: &[(i32, i32)]) -> bool {
        for &(df, dr) in dirs {
            let (mut x, mut y) = (f0 + df, r0 + dr);
            while on_board(x, y) {
                if (x, y) == (f, r) {
                    return true;
                }
                if self.at(x, y).is_some() {
                    break;
                }
                x += df;
                y += dr;
            }
        }
        false
    }

    fn pseudo_moves(&self) -> Vec<NMove> {
        let white = self.white_to_move;
        let mut out = Vec::new();
        let plain = |from, to| NMove {
            from,
            to,
            promo: None,
            ep_capture: false,
            castle_rook: None,
            double: false,
        };
        for r in 0..8 {
            for f in 0..8 {
                let Some(p) = self.at(f, r) else { continue };
                if p.white != white {
                    continue;
                }
                match p.kind {
                    'p' => self.pawn_moves(f, r, white, &mut out),
                    'n' | 'k' => {
                        let deltas = if p.kind == 'n' { &KNIGHT } else { &KING };
                        for &(df, dr) in deltas {
                            let (x, y) = (f + df, r + dr);
                            if on_board(x, y) && self.landing_ok(white, x, y) {
                                out.push(plain((f, r), (x, y)));
                            }
                        }
                        if p.kind == 'k' {
                            self.castle_moves(f, r, white, &mut out);
                        }
                    }
                    k => {
                        let mut dirs: Vec<(i32, i32)> = Vec::new();
                        if k == 'b' || k == 'q' {
                            dirs.extend(BISHOP_DIRS);
                        }
                        if k == 'r' || k == 'q' {
                            dirs.extend(ROOK_DIRS);
                        }
                        for (df, dr) in dirs {
                            let (mut x, mut y) = (f + df, r + dr);
                            while on_board(x, y) {
                                if self.landing_ok(white, x, y) {
                                    out.push(plain((f, r), (x, y)));
                                }
                                if self.at(x, y).is_some() {
                                    break;
                                }
                                x += df;
                                y += dr;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn pawn_moves(&self, f: i32, r: i32, white: bool, out: &mut Vec<NMove>) {
        let dir = if white { 1 } else { -1 };
        let last = if white { 7 } else { 0 };
        let mut dests: Vec<((i32, i32), bool, bool)> = Vec::new(); // (to, double, ep)
        if on_board(f, r + dir) && self.at(f, r + dir).is_none() {
            dests.push(((f, r + dir), false, false));
            if self.double_push_allowed(white, r) && on_board(f, r + 2 * dir) && self.at(f, r + 2 * dir).is_none() {
                dests.push(((f, r + 2 * dir), true, false));
            }
        }
        for df in [-1, 1] {
            let (x, y) = (f + df, r + dir);
            if !on_board(x, y) {
                continue;
            }
            match self.at(x, y) {
                Some(q) if q.white != white => dests.push(((x, y), false, false)),
                Some(q) if self.can_self_capture() && q.kind != 'k' => dests.push(((x, y), false, false)),
                Some(_) => {}
                None => {
                    if let Some((t, v)) = self.ep {
                        if t == (x, y) && self.at(v.0, v.1).is_some_and(|q| q.white != white) {
                            dests.push(((x, y), false, true));
                        }
                    }
                }
            }
        }
        if self.variant == "pawnsideways" {
            for df in [-1, 1] {
                if on_board(f + df, r) && self.at(f + df, r).is_none() {
                    dests.push(((f + df, r), false, false));
                }
            }
        }
        if self.variant == "pawnback" {
            let y = r - dir;
            let rel = if white { y } else { 7 - y };
            if on_board(f, y) && rel >= 1 && self.at(f, y).is_none() {
                dests.push(((f, y), false, false));
            }
        }
        for (to, double, ep) in dests {
            let base = NMove {
                from: (f, r),
                to,
                promo: None,
                ep_capture: ep,
                castle_rook: None,
                double,
            };
            if to.1 == last {
                for c in ['n', 'b', 'r', 'q'] {
                    let mut m = base.clone();
                    m.promo = Some(c);
                    out.push(m);
                }
            } else {
                out.push(base);
            }
        }
    }

    fn castle_moves(&self, f: i32, r: i32, white: bool, out: &mut Vec<NMove>) {
        if self.variant == "nocastling" || (self.variant == "nocastling10" && self.plies < 20) {
            return;
        }
        let home = if white { 0 } else { 7 };
        if (f, r) != (4, home) || self.attacked(4, home, !white) {
            return;
        }
        let (ks, qs) = if white { (0, 1) } else { (2, 3) };
        let empty = |x: i32| self.at(x, home).is_none();
        let safe = |x: i32| !self.attacked(x, home, !white);
        if self.castle[ks] && empty(5) && empty(6) && safe(5) && safe(6) {
            out.push(NMove {
                from: (4, home),
                to: (6, home),
                promo: None,
                ep_capture: false,
                castle_rook: Some(((7, home), (5, home))),
                double: false,
            });
        }
        if self.castle[qs] && empty(1) && empty(2) && empty(3) && safe(3) && safe(2) {
            out.push(NMove {
                from: (4, home),
                to: (2, home),
                promo: None,
                ep_capture: false,
                castle_rook: Some(((0, home), (3, home))),
                double: false,
            });
        }
    }

    pub fn apply(&self, m: &NMove) -> NState {
        let mut s = self.clone();
        let mut piece = s.at(m.from.0, m.from.1).unwrap();
        if m.ep_capture {
            let (_, v) = s.ep.unwrap();
            s.set(v.0, v.1, None);
        }
        s.set(m.from.0, m.from.1, None);
        if let Some(c) = m.promo {
            piece.kind = c;
        }
        s.set(m.to.0, m.to.1, Some(piece));
        if let Some((a, b)) = m.castle_rook {
            let rook = s.at(a.0, a.1);
            s.set(a.0, a.1, None);
            s.set(b.0, b.1, rook);
        }
        for sq in [m.from, m.to] {
            match sq {
                (4, 0) => {
                    s.castle[0] = false;
                    s.castle[1] = false;
                }
                (4, 7) => {
                    s.castle[2] = false;
                    s.castle[3] = false;
                }
                (7, 0) => s.castle[0] = false,
                (0, 0) => s.castle[1] = false,
                (7, 7) => s.castle[2] = false,
                (0, 7) => s.castle[3] = false,
                _ => {}
            }
        }
        s.ep = if m.double {
            Some(((m.from.0, (m.from.1 + m.to.1) / 2), m.to))
        } else {
            None
        };
        s.white_to_move = !s.white_to_move;
        s.plies += 1;
        s
    }

    fn king_of(&self, white: bool) -> (i32, i32) {
        for r in 0..8 {
            for f in 0..8 {
                if self.at(f, r) == Some(NPiece { white, kind: 'k' }) {
                    return (f, r);
                }
            }
        }
        panic!("no king")
    }

    pub fn legal_moves(&self) -> Vec<NMove> {
        let white = self.white_to_move;
        let mut v: Vec<NMove> = self
            .pseudo_moves()
            .into_iter()
            .filter(|m| {
                let next = self.apply(m);
                let k = next.king_of(white);
                !next.attacked(k.0, k.1, !white)
            })
            .collect();
        v.sort_by_key(|m| m.lan());
        v
    }

    pub fn legal_lans(&self) -> Vec<String> {
        self.legal_moves().iter().map(NMove::lan).collect()
    }
}

/// Leaf count with its own move application throughout.
pub fn naive_perft(s: &NState, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let moves = s.legal_moves();
    if depth == 1 {
        return moves.len() as u64;
    }
    moves.iter().map(|m| naive_perft(&s.apply(m), depth - 1)).sum()
}
