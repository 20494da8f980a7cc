//! Tangential basepoints of M_{0,5}, the S4 action on them, elementary
//! moves, the paths r_sigma and their products, modelled as reduced words
//! in a free groupoid.
//!
//! Each coordinate lives on the real circle 0 < 1 < x0 < y0 < inf.  An
//! arrow `ab` sits at a and points along the real axis to its neighbour b.
//! The x-coordinate never rests at y0 and the y-coordinate never at x0, so
//! each coordinate has eight arrows joined into a cycle by s and t moves.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::matgroup::{eval_word, upsilon, GroupWord, Perm, ProjMat};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pt {
    Zero,
    One,
    X0,
    Y0,
    Inf,
}

impl Pt {
    fn symbol(self) -> &'static str {
        match self {
            Pt::Zero => "0",
            Pt::One => "1",
            Pt::X0 => "x0",
            Pt::Y0 => "y0",
            Pt::Inf => "∞",
        }
    }

    /// Position on the circle 0, 1, x0, y0, inf.
    fn index(self) -> usize {
        self as usize
    }

    fn neighbours(self) -> [Pt; 2] {
        const ORDER: [Pt; 5] = [Pt::Zero, Pt::One, Pt::X0, Pt::Y0, Pt::Inf];
        let i = self.index();
        [ORDER[(i + 4) % 5], ORDER[(i + 1) % 5]]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub base: Pt,
    pub dir: Pt,
}

impl Arrow {
    pub fn new(base: Pt, dir: Pt) -> Result<Self, Error> {
        if !base.neighbours().contains(&dir) {
            return Err(Error::Domain(format!(
                "{}{} is not a tangential arrow",
                base.symbol(),
                dir.symbol()
            )));
        }
        Ok(Arrow { base, dir })
    }

    /// True when the arrow points in the increasing real direction.
    pub fn positive(&self) -> bool {
        match (self.base, self.dir) {
            (Pt::Inf, d) => d == Pt::Zero,
            (b, Pt::Inf) => b == Pt::Y0,
            (b, d) => d.index() > b.index(),
        }
    }

    fn other_dir(&self) -> Pt {
        let n = self.base.neighbours();
        if n[0] == self.dir {
            n[1]
        } else {
            n[0]
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.base.symbol(), self.dir.symbol())
    }
}

impl FromStr for Arrow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut pts = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let (p, n) = if let Some(r) = rest.strip_prefix("x0") {
                (Pt::X0, r)
            } else if let Some(r) = rest.strip_prefix("y0") {
                (Pt::Y0, r)
            } else if let Some(r) = rest.strip_prefix("inf") {
                (Pt::Inf, r)
            } else if let Some(r) = rest.strip_prefix('∞') {
                (Pt::Inf, r)
            } else if let Some(r) = rest.strip_prefix('0') {
                (Pt::Zero, r)
            } else if let Some(r) = rest.strip_prefix('1') {
                (Pt::One, r)
            } else {
                return Err(Error::Parse(format!("bad arrow {s:?}")));
            };
            pts.push(p);
            rest = n;
        }
        if pts.len() != 2 {
            return Err(Error::Parse(format!("bad arrow {s:?}")));
        }
        Arrow::new(pts[0], pts[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    X,
    Y,
}

impl Coord {
    fn allowed(self, a: &Arrow) -> bool {
        match self {
            Coord::X => a.base != Pt::Y0,
            Coord::Y => a.base != Pt::X0,
        }
    }

    /// The s move: along the real axis from ab to ba.  The x-coordinate
    /// runs from inf y0 past y0 to x0 y0, and the y-coordinate from 1 x0
    /// past x0 to y0 x0; the reverse segments close the cycle.
    pub fn s_move(self, a: &Arrow) -> Arrow {
        use Pt::*;
        let ex = match self {
            Coord::X => [(Inf, Y0), (X0, Y0)],
            Coord::Y => [(One, X0), (Y0, X0)],
        };
        let key = (a.base, a.dir);
        if key == ex[0] {
            Arrow { base: ex[1].0, dir: ex[1].1 }
        } else if key == ex[1] {
            Arrow { base: ex[0].0, dir: ex[0].1 }
        } else {
            Arrow { base: a.dir, dir: a.base }
        }
    }

    fn name(self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::Y => "y",
        }
    }
}

/// A tangential basepoint (x-arrow, y-arrow).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TangBase {
    pub x: Arrow,
    pub y: Arrow,
}

impl TangBase {
    pub fn new(x: Arrow, y: Arrow) -> Result<Self, Error> {
        if !Coord::X.allowed(&x) || !Coord::Y.allowed(&y) {
            return Err(Error::Domain(format!("({x}, {y}) is not a basepoint")));
        }
        if x.base == Pt::X0 && y.base == Pt::Y0 {
            return Err(Error::Domain(format!("({x}, {y}) is not a basepoint")));
        }
        Ok(TangBase { x, y })
    }

    pub fn base() -> Self {
        "(01,01)".parse().unwrap()
    }
}

impl fmt::Display for TangBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl FromStr for TangBase {
    type Err = Error;

    /// "(01,01)" or "01 01".
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("bad basepoint {s:?}")));
        }
        TangBase::new(parts[0].parse()?, parts[1].parse()?)
    }
}

impl Serialize for TangBase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

/// The generators (12), (24), (34) of the table.
pub const TABLE_GENERATORS: [(u8, u8); 3] = [(1, 2), (2, 4), (3, 4)];

type Table = BTreeMap<TangBase, [TangBase; 3]>;

fn table() -> &'static Result<Table, Error> {
    static T: OnceLock<Result<Table, Error>> = OnceLock::new();
    T.get_or_init(|| parse_table(include_str!("../data/s4_table.txt")))
}

fn parse_table(src: &str) -> Result<Table, Error> {
    let mut out = Table::new();
    for line in src.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<TangBase> = line
            .split('|')
            .map(|c| c.parse())
            .collect::<Result<_, _>>()?;
        if f.len() != 4 {
            return Err(Error::Parse(format!("bad table row {line:?}")));
        }
        out.insert(f[0], [f[1], f[2], f[3]]);
    }
    if out.len() != 16 {
        return Err(Error::Parse(format!("table has {} rows, expected 16", out.len())));
    }
    Ok(out)
}

/// The 16 basepoints in table order of their sorted keys.
pub fn basepoints() -> Result<Vec<TangBase>, Error> {
    Ok(table().as_ref().map_err(Clone::clone)?.keys().copied().collect())
}

/// Shortest word in (12), (24), (34) for sigma, rightmost acting first.
pub fn generator_word(sigma: &Perm) -> Vec<usize> {
    static W: OnceLock<HashMap<Perm, Vec<usize>>> = OnceLock::new();
    let words = W.get_or_init(|| {
        let gens: Vec<Perm> = TABLE_GENERATORS
            .iter()
            .map(|&(a, b)| Perm::transposition(a, b))
            .collect();
        let mut seen: HashMap<Perm, Vec<usize>> = HashMap::new();
        seen.insert(Perm::identity(), vec![]);
        let mut frontier = vec![Perm::identity()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                for (i, g) in gens.iter().enumerate() {
                    let q = g.compose(p);
                    if !seen.contains_key(&q) {
                        let mut w = vec![i];
                        w.extend(&seen[p]);
                        seen.insert(q, w);
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
        seen
    });
    words[sigma].clone()
}

/// sigma acting on a basepoint through the table.
pub fn s4_act(sigma: &Perm, b: &TangBase) -> Result<TangBase, Error> {
    let t = table().as_ref().map_err(Clone::clone)?;
    let mut cur = *b;
    for &g in generator_word(sigma).iter().rev() {
        cur = t
            .get(&cur)
            .ok_or_else(|| Error::Domain(format!("{cur} is not in the table")))?[g];
    }
    Ok(cur)
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCheck {
    pub relation: String,
    pub pass: bool,
}

/// Each Coxeter relation of (12), (24), (34) acts trivially on all 16 rows.
pub fn table_round_trip() -> Result<Vec<TableCheck>, Error> {
    let t = table().as_ref().map_err(Clone::clone)?;
    let rels: [(&str, Vec<usize>); 6] = [
        ("(12)^2", vec![0, 0]),
        ("(24)^2", vec![1, 1]),
        ("(34)^2", vec![2, 2]),
        ("((12)(24))^3", [0, 1].repeat(3)),
        ("((12)(34))^2", [0, 2].repeat(2)),
        ("((24)(34))^3", [1, 2].repeat(3)),
    ];
    Ok(rels
        .iter()
        .map(|(name, w)| TableCheck {
            relation: name.to_string(),
            pass: t.keys().all(|b| w.iter().fold(*b, |c, &g| t[&c][g]) == *b),
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    S,
    /// Half turn about the base; `upper` for the upper half plane.
    T { upper: bool },
}

/// One step of a coordinate path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub kind: MoveKind,
    pub from: Arrow,
    pub to: Arrow,
}

impl Step {
    pub fn inverse(&self) -> Step {
        Step {
            kind: self.kind,
            from: self.to,
            to: self.from,
        }
    }

    /// Complex conjugate path: half turns switch half plane.
    pub fn conj(&self) -> Step {
        match self.kind {
            MoveKind::S => *self,
            MoveKind::T { upper } => Step {
                kind: MoveKind::T { upper: !upper },
                ..*self
            },
        }
    }

    /// t is in the upper half plane when it turns a positive arrow into a
    /// negative one.
    fn rule_side(from: &Arrow, to: &Arrow) -> bool {
        from.positive() && !to.positive()
    }

    /// Half turns on the default side run counterclockwise.
    pub fn is_positive(&self) -> bool {
        match self.kind {
            MoveKind::S => true,
            MoveKind::T { upper } => upper == Step::rule_side(&self.from, &self.to),
        }
    }

    fn token(&self) -> &'static str {
        match self.kind {
            MoveKind::S => "s",
            MoveKind::T { upper } => {
                if upper == Step::rule_side(&self.from, &self.to) {
                    "t"
                } else {
                    "t*"
                }
            }
        }
    }
}

fn s_step(c: Coord, a: &Arrow) -> Step {
    Step {
        kind: MoveKind::S,
        from: *a,
        to: c.s_move(a),
    }
}

fn t_step(a: &Arrow) -> Step {
    let to = Arrow {
        base: a.base,
        dir: a.other_dir(),
    };
    Step {
        kind: MoveKind::T {
            upper: Step::rule_side(a, &to),
        },
        from: *a,
        to,
    }
}

/// Appends with free cancellation of w w^-1.
fn push_reduced(path: &mut Vec<Step>, s: Step) {
    if path.last() == Some(&s.inverse()) {
        path.pop();
    } else {
        path.push(s);
    }
}

/// All shortest s/t move sequences between two arrows.
fn shortest_moves(c: Coord, from: &Arrow, to: &Arrow) -> Vec<Vec<Step>> {
    let mut out = Vec::new();
    for first_s in [true, false] {
        let mut cur = *from;
        let mut steps = Vec::new();
        let mut use_s = first_s;
        for _ in 0..8 {
            if cur == *to {
                break;
            }
            let st = if use_s { s_step(c, &cur) } else { t_step(&cur) };
            cur = st.to;
            steps.push(st);
            use_s = !use_s;
        }
        if cur == *to {
            out.push(steps);
        }
    }
    let best = out.iter().map(Vec::len).min().unwrap_or(0);
    out.retain(|p| p.len() == best);
    out.dedup();
    out
}

/// Signed half turns about each point, counterclockwise positive.
pub fn half_turns(steps: &[Step]) -> BTreeMap<Pt, i32> {
    let mut out = BTreeMap::new();
    for s in steps {
        if let MoveKind::T { .. } = s.kind {
            *out.entry(s.from.base).or_insert(0) += if s.is_positive() { 1 } else { -1 };
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn turns_text(t: &BTreeMap<Pt, i32>) -> String {
    let parts: Vec<String> = t.iter().map(|(p, n)| format!("{}:{n}", p.symbol())).collect();
    format!("{{{}}}", parts.join(", "))
}

/// A path in both coordinates from a basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathWord {
    pub start: TangBase,
    pub x: Vec<Step>,
    pub y: Vec<Step>,
}

impl PathWord {
    pub fn identity(b: TangBase) -> Self {
        PathWord {
            start: b,
            x: vec![],
            y: vec![],
        }
    }

    pub fn end(&self) -> TangBase {
        TangBase {
            x: self.x.last().map(|s| s.to).unwrap_or(self.start.x),
            y: self.y.last().map(|s| s.to).unwrap_or(self.start.y),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_empty() && self.y.is_empty()
    }

    pub fn is_loop(&self) -> bool {
        self.end() == self.start
    }

    fn coord(&self, c: Coord) -> &Vec<Step> {
        match c {
            Coord::X => &self.x,
            Coord::Y => &self.y,
        }
    }

    /// Concatenation with free reduction; q must start where self ends.
    pub fn concat(&self, q: &PathWord) -> Result<PathWord, Error> {
        if q.start != self.end() {
            return Err(Error::Domain(format!(
                "basepoint mismatch: {} ends at {}, next starts at {}",
                self,
                self.end(),
                q.start
            )));
        }
        let mut x = self.x.clone();
        let mut y = self.y.clone();
        for s in &q.x {
            push_reduced(&mut x, *s);
        }
        for s in &q.y {
            push_reduced(&mut y, *s);
        }
        Ok(PathWord {
            start: self.start,
            x,
            y,
        })
    }

    pub fn inverse(&self) -> PathWord {
        PathWord {
            start: self.end(),
            x: self.x.iter().rev().map(Step::inverse).collect(),
            y: self.y.iter().rev().map(Step::inverse).collect(),
        }
    }

    fn coord_text(steps: &[Step]) -> String {
        if steps.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<(String, usize)> = Vec::new();
        for s in steps {
            let tok = s.token().to_string();
            match parts.last_mut() {
                Some((t, n)) if *t == tok && tok != "s" => *n += 1,
                _ => parts.push((tok, 1)),
            }
        }
        parts
            .iter()
            .map(|(t, n)| if *n == 1 { t.clone() } else { format!("{t}^{n}") })
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Number of consecutive half turns when a coordinate is only half turns.
    pub fn t_power(&self, c: Coord) -> Option<usize> {
        let p = self.coord(c);
        if p.iter().all(|s| matches!(s.kind, MoveKind::T { .. })) {
            Some(p.len())
        } else {
            None
        }
    }

    /// Parses "(x: s.t | y: t.s.t) @ (01,01)" with an optional "→(..)"
    /// end, which is checked.
    pub fn parse(s: &str) -> Result<PathWord, Error> {
        let (body, bases) = s
            .split_once('@')
            .ok_or_else(|| Error::Parse(format!("path {s:?} needs '@ basepoint'")))?;
        let (start_s, end_s) = match bases.split_once('→').or_else(|| bases.split_once("->")) {
            Some((a, b)) => (a, Some(b)),
            None => (bases, None),
        };
        let start: TangBase = start_s.parse()?;
        let body = body.trim().trim_start_matches('(').trim_end_matches(')');
        let (xs, ys) = body
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("path {s:?} needs 'x: .. | y: ..'")))?;
        let parse_coord = |c: Coord, txt: &str, start: Arrow| -> Result<Vec<Step>, Error> {
            let txt = txt
                .trim()
                .strip_prefix(c.name())
                .and_then(|t| t.trim_start().strip_prefix(':'))
                .ok_or_else(|| Error::Parse(format!("expected '{}:' in {txt:?}", c.name())))?
                .trim();
            let mut cur = start;
            let mut out = Vec::new();
            if txt == "1" {
                return Ok(out);
            }
            for tok in txt.split('.') {
                let tok = tok.trim();
                let (name, n) = match tok.split_once('^') {
                    Some((a, b)) => (
                        a,
                        b.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?,
                    ),
                    None => (tok, 1),
                };
                for _ in 0..n {
                    let st = match name {
                        "s" => s_step(c, &cur),
                        "t" => t_step(&cur),
                        "t*" => t_step(&cur).conj(),
                        _ => return Err(Error::Parse(format!("unknown move {tok:?}"))),
                    };
                    cur = st.to;
                    out.push(st);
                }
            }
            Ok(out)
        };
        let p = PathWord {
            start,
            x: parse_coord(Coord::X, xs, start.x)?,
            y: parse_coord(Coord::Y, ys, start.y)?,
        };
        if let Some(e) = end_s {
            let e: TangBase = e.parse()?;
            if e != p.end() {
                return Err(Error::Domain(format!("path ends at {}, not {e}", p.end())));
            }
        }
        Ok(p)
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x: {} | y: {}) @ {}→{}",
            Self::coord_text(&self.x),
            Self::coord_text(&self.y),
            self.start,
            self.end()
        )
    }
}

impl Serialize for PathWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

/// The three generators of the path group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Gen {
    #[serde(rename = "r(12)")]
    R12,
    #[serde(rename = "r(24)")]
    R24,
    #[serde(rename = "r(23)")]
    R23,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::R12, Gen::R24, Gen::R23];

    pub fn perm(self) -> Perm {
        match self {
            Gen::R12 => Perm::transposition(1, 2),
            Gen::R24 => Perm::transposition(2, 4),
            Gen::R23 => Perm::transposition(2, 3),
        }
    }

    /// Image under the map to PU(2,1).
    pub fn matrix_name(self) -> &'static str {
        match self {
            Gen::R12 => "R1",
            Gen::R24 => "R2",
            Gen::R23 => "R3",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Gen::R12 => "r(12)",
            Gen::R24 => "r(24)",
            Gen::R23 => "r(23)",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RSigma {
    pub path: PathWord,
    /// Other minimal decompositions of equal length, if any.
    pub ties: Vec<PathWord>,
    pub exceptional: bool,
}

/// r_sigma at b: minimal s/t moves to sigma(b) in each coordinate, with
/// (s_x, s_y) replaced by (s_x then t_x twice, s_y).
pub fn r_sigma(sigma: &Perm, b: &TangBase) -> Result<RSigma, Error> {
    let target = s4_act(sigma, b)?;
    let xs = shortest_moves(Coord::X, &b.x, &target.x);
    let ys = shortest_moves(Coord::Y, &b.y, &target.y);
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::NoConvergence(format!(
            "no decomposition of r_{sigma} at {b}"
        )));
    }
    let mut cands: Vec<PathWord> = Vec::new();
    for x in &xs {
        for y in &ys {
            cands.push(PathWord {
                start: *b,
                x: x.clone(),
                y: y.clone(),
            });
        }
    }
    let mut path = cands.remove(0);
    let exceptional = path.x.len() == 1
        && path.y.len() == 1
        && path.x[0].kind == MoveKind::S
        && path.y[0].kind == MoveKind::S;
    if exceptional {
        let a = path.x[0].to;
        let t1 = t_step(&a);
        let t2 = t_step(&t1.to);
        path.x.push(t1);
        path.x.push(t2);
    }
    Ok(RSigma {
        path,
        ties: cands,
        exceptional,
    })
}

/// r_sigma^-1 at b: r_(sigma^-1) with every half turn conjugated.  Away
/// from the exceptional case and from ties this is the reverse of r_sigma.
pub fn r_sigma_inv_literal(sigma: &Perm, b: &TangBase) -> Result<RSigma, Error> {
    let mut r = r_sigma(&sigma.inverse(), b)?;
    let conj = |p: &mut PathWord| {
        p.x = p.x.iter().map(Step::conj).collect();
        p.y = p.y.iter().map(Step::conj).collect();
    };
    conj(&mut r.path);
    r.ties.iter_mut().for_each(conj);
    Ok(r)
}

/// r_sigma^-1 at b as the reverse of r_sigma from sigma^-1(b).
pub fn r_sigma_inv(sigma: &Perm, b: &TangBase) -> Result<RSigma, Error> {
    let from = s4_act(&sigma.inverse(), b)?;
    let r = r_sigma(sigma, &from)?;
    Ok(RSigma {
        path: r.path.inverse(),
        ties: r.ties.iter().map(PathWord::inverse).collect(),
        exceptional: r.exceptional,
    })
}

/// Basepoints where the two readings of r_sigma^-1 disagree.
pub fn inverse_discrepancies() -> Result<Vec<String>, Error> {
    let mut out = Vec::new();
    for b in basepoints()? {
        for g in Gen::ALL {
            let lit = r_sigma_inv_literal(&g.perm(), &b)?.path;
            let rev = r_sigma_inv(&g.perm(), &b)?.path;
            if lit != rev {
                out.push(format!("{}^-1 at {b}: reverse {rev}, conjugate {lit}", g.label()));
            }
        }
    }
    Ok(out)
}

/// A word in the generators and their inverses, read left to right as
/// successive odot factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RWord(pub Vec<(Gen, bool)>);

impl RWord {
    pub fn parse(s: &str) -> Result<RWord, Error> {
        let mut out = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '⊙' || c == '*') {
            let tok = tok.trim();
            if tok.is_empty() || tok == "1" {
                continue;
            }
            let (name, inv) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let g = match name {
                "r(12)" | "r12" => Gen::R12,
                "r(24)" | "r24" => Gen::R24,
                "r(23)" | "r23" => Gen::R23,
                _ => return Err(Error::UnknownName(tok.to_string())),
            };
            out.push((g, inv));
        }
        Ok(RWord(out))
    }

    pub fn pow(&self, n: usize) -> RWord {
        RWord(self.0.repeat(n))
    }
}

impl fmt::Display for RWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, inv)| format!("{}{}", g.label(), if *inv { "^-1" } else { "" }))
            .collect();
        write!(f, "{}", parts.join(" ⊙ "))
    }
}

/// The odot product of the word's factors, starting at b.
pub fn evaluate(w: &RWord, b: &TangBase) -> Result<PathWord, Error> {
    let mut p = PathWord::identity(*b);
    for (g, inv) in &w.0 {
        let here = p.end();
        let r = if *inv {
            r_sigma_inv(&g.perm(), &here)?
        } else {
            r_sigma(&g.perm(), &here)?
        };
        p = p.concat(&r.path)?;
    }
    Ok(p)
}

/// The S4 image: r_s odot r_t runs like r_(t o s).
pub fn to_s4(w: &RWord) -> Perm {
    w.0.iter().fold(Perm::identity(), |acc, (g, inv)| {
        let p = if *inv { g.perm().inverse() } else { g.perm() };
        p.compose(&acc)
    })
}

/// The matrix word: r_s odot r_t maps to R_t R_s, the order under which
/// the S4 images agree (see [`t_word_with`]).
pub fn t_word(w: &RWord) -> GroupWord {
    t_word_with(w, true)
}

/// `reversed = false` gives R_s R_t for r_s odot r_t.
pub fn t_word_with(w: &RWord, reversed: bool) -> GroupWord {
    let mut letters: Vec<(String, i64)> = w
        .0
        .iter()
        .map(|(g, inv)| (g.matrix_name().to_string(), if *inv { -1 } else { 1 }))
        .collect();
    if reversed {
        letters.reverse();
    }
    GroupWord { letters }
}

pub fn to_pu21(w: &RWord) -> Result<ProjMat, Error> {
    eval_word(&t_word(w))
}

#[derive(Clone, Debug, Serialize)]
pub struct PathCheck {
    pub id: String,
    pub word: String,
    pub path: PathWord,
    pub expected: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyCheck {
    pub max_length: usize,
    pub words: usize,
    pub agree: usize,
    pub agree_other_order: usize,
    pub endpoints_agree: usize,
    pub pass: bool,
}

/// Upsilon(T(w)) = to_s4(w) and end(w) = to_s4(w)(01,01) for all words of
/// length <= max_len in the generators and inverses.
pub fn consistency(max_len: usize) -> Result<ConsistencyCheck, Error> {
    let letters: Vec<(Gen, bool)> = Gen::ALL
        .iter()
        .flat_map(|g| [(*g, false), (*g, true)])
        .collect();
    let b0 = TangBase::base();
    let mut words = vec![RWord::default()];
    let mut layer = vec![RWord::default()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                let mut v = w.0.clone();
                v.push(*l);
                next.push(RWord(v));
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    let mut agree = 0;
    let mut agree_other = 0;
    let mut ends = 0;
    for w in &words {
        let p = to_s4(w);
        if upsilon(&t_word(w))? == p {
            agree += 1;
        }
        if upsilon(&t_word_with(w, false))? == p {
            agree_other += 1;
        }
        if evaluate(w, &b0)?.end() == s4_act(&p, &b0)? {
            ends += 1;
        }
    }
    Ok(ConsistencyCheck {
        max_length: max_len,
        words: words.len(),
        pass: agree == words.len() && ends == words.len(),
        agree,
        agree_other_order: agree_other,
        endpoints_agree: ends,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FreenessReport {
    pub checks: Vec<PathCheck>,
    /// Largest n for which r_sigma^n was checked to be non-trivial.
    pub power_bound: usize,
    pub pass: bool,
}

fn check(id: &str, w: &RWord, expected: &str, ok: impl Fn(&PathWord) -> bool) -> Result<PathCheck, Error> {
    let p = evaluate(w, &TangBase::base())?;
    Ok(PathCheck {
        id: id.into(),
        word: w.to_string(),
        pass: ok(&p),
        note: None,
        path: p,
        expected: expected.into(),
    })
}

/// The finite checklist behind freeness: no lift of an S4 relation among
/// (12), (23), (24) is the identity path; r_s odot r_s^-1 is.
pub fn freeness_evidence() -> Result<FreenessReport, Error> {
    let mut checks = Vec::new();
    let power_bound = 6;
    for g in Gen::ALL {
        let w = RWord(vec![(g, false), (g, true)]);
        checks.push(check(
            &format!("{} ⊙ {}^-1", g.label(), g.label()),
            &w,
            "identity",
            PathWord::is_identity,
        )?);
        for n in 2..=power_bound {
            let w = RWord(vec![(g, false); n]);
            checks.push(check(
                &format!("{}^{n}", g.label()),
                &w,
                "non-identity",
                |p| !p.is_identity(),
            )?);
        }
    }
    for (a, b) in [(Gen::R12, Gen::R23), (Gen::R12, Gen::R24), (Gen::R23, Gen::R24)] {
        let w = RWord(vec![(a, false), (b, false)]).pow(3);
        checks.push(check(
            &format!("({} ⊙ {})^3", a.label(), b.label()),
            &w,
            "non-identity",
            |p| !p.is_identity(),
        )?);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(FreenessReport {
        checks,
        power_bound,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PathsReport {
    pub table: Vec<TableCheck>,
    pub examples: Vec<PathCheck>,
    /// r(23) ⊙ r(24) as a single product.
    pub r23_r24: PathWord,
    pub r23_r24_cubed: PathWord,
    pub t_y6_matches: bool,
    pub freeness: FreenessReport,
    pub consistency: ConsistencyCheck,
    pub t_images: Vec<(String, String)>,
    pub ties: Vec<String>,
    pub inverse_discrepancies: Vec<String>,
    pub pass: bool,
}

pub fn verify_paths(max_len: usize) -> Result<PathsReport, Error> {
    let b0 = TangBase::base();
    let table = table_round_trip()?;
    let mut examples = Vec::new();
    let r12 = r_sigma(&Gen::R12.perm(), &b0)?;
    let want: PathWord = PathWord::parse("(x: s.t | y: t.s.t) @ (01,01)→(1x0,∞y0)")?;
    examples.push(PathCheck {
        id: "r(12) at (01,01)".into(),
        word: "r(12)".into(),
        expected: want.to_string(),
        pass: r12.path == want,
        note: None,
        path: r12.path,
    });
    let ex_base: TangBase = "(10,∞0)".parse()?;
    let r_ex = r_sigma(&Gen::R12.perm(), &ex_base)?;
    let want_ex = PathWord::parse("(x: s.t^2 | y: s) @ (10,∞0)→(01,0∞)")?;
    examples.push(PathCheck {
        id: "r(12) at (10,∞0), exceptional".into(),
        word: "r(12)".into(),
        expected: want_ex.to_string(),
        pass: r_ex.exceptional && r_ex.path == want_ex,
        note: None,
        path: r_ex.path,
    });
    let sq = evaluate(&RWord(vec![(Gen::R12, false); 2]), &b0)?;
    let tx = half_turns(&sq.x);
    let ty = half_turns(&sq.y);
    let positive = sq.x.iter().chain(&sq.y).all(Step::is_positive);
    examples.push(PathCheck {
        id: "r(12) ⊙ r(12) winds about 1 (x) and ∞ (y)".into(),
        word: "r(12) ⊙ r(12)".into(),
        expected: "x: one positive turn about 1; y: one positive turn about ∞".into(),
        pass: sq.is_loop()
            && positive
            && tx == BTreeMap::from([(Pt::One, 2)])
            && ty.get(&Pt::Inf) == Some(&2),
        note: Some(format!("half turns x {}, y {}", turns_text(&tx), turns_text(&ty))),
        path: sq,
    });
    let w = RWord(vec![(Gen::R23, false), (Gen::R24, false)]);
    let single = evaluate(&w, &b0)?;
    let cubed = evaluate(&w.pow(3), &b0)?;
    let t_y6 = cubed.x.is_empty() && cubed.t_power(Coord::Y) == Some(6) && cubed.is_loop();
    let t_images = Gen::ALL
        .iter()
        .map(|g| {
            let w = RWord(vec![(*g, false)]);
            (g.label().to_string(), t_word(&w).to_string())
        })
        .chain(std::iter::once((
            w.to_string(),
            t_word(&w).to_string(),
        )))
        .collect();
    let mut ties = Vec::new();
    for b in basepoints()? {
        for g in Gen::ALL {
            let r = r_sigma(&g.perm(), &b)?;
            for t in &r.ties {
                ties.push(format!("{} at {b}: {} or {}", g.label(), r.path, t));
            }
        }
    }
    let freeness = freeness_evidence()?;
    let cons = consistency(max_len)?;
    let pass = table.iter().all(|t| t.pass)
        && examples.iter().all(|e| e.pass)
        && t_y6
        && freeness.pass
        && cons.pass;
    Ok(PathsReport {
        table,
        examples,
        r23_r24: single,
        r23_r24_cubed: cubed,
        t_y6_matches: t_y6,
        freeness,
        consistency: cons,
        t_images,
        ties,
        inverse_discrepancies: inverse_discrepancies()?,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn table_rows() {
        let b: TangBase = "(01,01)".parse().unwrap();
        let g12 = Perm::transposition(1, 2);
        assert_eq!(s4_act(&g12, &b).unwrap().to_string(), "(1x0,∞y0)");
        let b5: TangBase = "(10,10)".parse().unwrap();
        let g24 = Perm::transposition(2, 4);
        assert_eq!(s4_act(&g24, &b5).unwrap().to_string(), "(10,∞0)");
        assert_eq!(s4_act(&Perm::identity(), &b5).unwrap(), b5);
        assert!(table_round_trip().unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn r12_example() {
        let r = r_sigma(&Perm::transposition(1, 2), &TangBase::base()).unwrap();
        assert_eq!(r.path.to_string(), "(x: s.t | y: t.s.t) @ (01,01)→(1x0,∞y0)");
        assert!(r.ties.is_empty());
        // the half planes named in the text
        assert_eq!(r.path.x[1].kind, MoveKind::T { upper: false });
        assert_eq!(r.path.y[0].kind, MoveKind::T { upper: true });
        assert_eq!(r.path.y[2].kind, MoveKind::T { upper: true });
    }

    #[test]
    fn inverse_cancels() {
        for g in Gen::ALL {
            let p = evaluate(&RWord(vec![(g, false), (g, true)]), &TangBase::base()).unwrap();
            assert!(p.is_identity(), "{}", g.label());
        }
    }

    #[test]
    fn r23_r24() {
        let w = RWord::parse("r(23) ⊙ r(24)").unwrap();
        let p = evaluate(&w, &TangBase::base()).unwrap();
        assert!(p.x.is_empty());
        assert_eq!(p.t_power(Coord::Y), Some(2));
        let c = evaluate(&w.pow(3), &TangBase::base()).unwrap();
        assert_eq!(c.to_string(), "(x: 1 | y: t^6) @ (01,01)→(01,01)");
    }

    #[test]
    fn text_round_trip() {
        let w = RWord::parse("r12 r24^-1 r23 r12").unwrap();
        let p = evaluate(&w, &TangBase::base()).unwrap();
        assert_eq!(PathWord::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn upsilon_consistency() {
        let c = consistency(4).unwrap();
        assert!(c.pass, "{c:?}");
    }

    fn word_strategy() -> impl Strategy<Value = RWord> {
        prop::collection::vec((0usize..3, any::<bool>()), 0..8)
            .prop_map(|v| RWord(v.into_iter().map(|(g, i)| (Gen::ALL[g], i)).collect()))
    }

    proptest! {
        #[test]
        fn word_times_inverse(w in word_strategy()) {
            let b0 = TangBase::base();
            let mut v = w.0.clone();
            v.extend(w.0.iter().rev().map(|(g, i)| (*g, !*i)));
            prop_assert!(evaluate(&RWord(v), &b0).unwrap().is_identity());
        }

        #[test]
        fn endpoint_follows_s4(w in word_strategy()) {
            let b0 = TangBase::base();
            let p = evaluate(&w, &b0).unwrap();
            prop_assert_eq!(p.end(), s4_act(&to_s4(&w), &b0).unwrap());
            prop_assert_eq!(PathWord::parse(&p.to_string()).unwrap(), p);
        }
    }
}
