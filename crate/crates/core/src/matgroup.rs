//! 3x3 projective matrices over Q(zeta12), the matrix catalog, word
//! evaluation and exact presentation checks.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::Error;

/// A 3x3 matrix over Q(zeta12).  Equality as group elements is projective
/// (see [`ProjMat::proj_eq`]); `==` is entrywise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjMat {
    pub m: [[CycNum; 3]; 3],
}

impl ProjMat {
    pub fn from_fn(f: impl Fn(usize, usize) -> CycNum) -> Self {
        ProjMat {
            m: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { CycNum::one() } else { CycNum::zero() })
    }

    /// Entries given as text, e.g. `["1", "0", "rho"]`.
    pub fn parse_rows(rows: [[&str; 3]; 3]) -> Self {
        Self::from_fn(|i, j| rows[i][j].parse().expect("catalog entry"))
    }

    pub fn mul(&self, o: &ProjMat) -> ProjMat {
        Self::from_fn(|i, j| (0..3).map(|k| &self.m[i][k] * &o.m[k][j]).sum())
    }

    pub fn transpose(&self) -> ProjMat {
        Self::from_fn(|i, j| self.m[j][i].clone())
    }

    pub fn conj(&self) -> ProjMat {
        Self::from_fn(|i, j| self.m[i][j].conj())
    }

    pub fn scale(&self, s: &CycNum) -> ProjMat {
        Self::from_fn(|i, j| s * &self.m[i][j])
    }

    pub fn det(&self) -> CycNum {
        let a = &self.m;
        &a[0][0] * &(&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
            - &a[0][1] * &(&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
            + &a[0][2] * &(&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
    }

    fn adjugate(&self) -> ProjMat {
        let a = &self.m;
        let cof = |i: usize, j: usize| {
            let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let c: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let d = &a[r[0]][c[0]] * &a[r[1]][c[1]] - &a[r[0]][c[1]] * &a[r[1]][c[0]];
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        };
        Self::from_fn(|i, j| cof(j, i))
    }

    /// J0 * conj(g)^T * J0, the inverse of a PU(2,1) member up to a unit.
    pub fn unitary_inverse(&self) -> ProjMat {
        let j0 = j0();
        j0.mul(&self.conj().transpose()).mul(&j0)
    }

    /// Inverse as a group element: the unitary formula for PU(2,1)
    /// members, the adjugate otherwise.
    pub fn inverse(&self) -> Result<ProjMat, Error> {
        if self.pu21_member() {
            return Ok(self.unitary_inverse());
        }
        let d = self.det();
        if d.is_zero() {
            return Err(Error::Singular);
        }
        Ok(self.adjugate().scale(&d.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<ProjMat, Error> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = ProjMat::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// The unit scalar lambda with self = lambda * other, if one exists.
    pub fn proj_ratio(&self, other: &ProjMat) -> Option<CycNum> {
        let mut lam: Option<CycNum> = None;
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = (&self.m[i][j], &other.m[i][j]);
                match (a.is_zero(), b.is_zero()) {
                    (true, true) => continue,
                    (false, false) => {}
                    _ => return None,
                }
                match &lam {
                    None => lam = Some(a / b),
                    Some(l) => {
                        if *a != l * b {
                            return None;
                        }
                    }
                }
            }
        }
        lam.filter(CycNum::is_unit_root)
    }

    pub fn proj_eq(&self, other: &ProjMat) -> bool {
        self.proj_ratio(other).is_some()
    }

    pub fn is_proj_identity(&self) -> bool {
        self.proj_eq(&ProjMat::identity())
    }

    /// ^t g J0 conj(g) = J0 up to a unit scalar.
    pub fn pu21_member(&self) -> bool {
        let j0 = j0();
        self.transpose().mul(&j0).mul(&self.conj()).proj_eq(&j0)
    }

    pub fn text_rows(&self) -> Vec<Vec<String>> {
        self.m
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

impl fmt::Display for ProjMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .text_rows()
            .into_iter()
            .map(|r| format!("[{}]", r.join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl Serialize for ProjMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.text_rows().serialize(s)
    }
}

pub fn j0() -> ProjMat {
    ProjMat::parse_rows([["0", "0", "1"], ["0", "1", "0"], ["1", "0", "0"]])
}

/// Integer matrix of size N (2 for PSL(2,Z) elements, 6 for Sp(6,Z)).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMat<const N: usize>(pub [[i64; N]; N]);

pub type IntMat2 = IntMat<2>;
pub type IntMat6 = IntMat<6>;

impl<const N: usize> IntMat<N> {
    pub fn identity() -> Self {
        IntMat(std::array::from_fn(|i| {
            std::array::from_fn(|j| i64::from(i == j))
        }))
    }

    pub fn mul(&self, o: &Self) -> Self {
        IntMat(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..N).map(|k| self.0[i][k] * o.0[k][j]).sum())
        }))
    }

    pub fn transpose(&self) -> Self {
        IntMat(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    pub fn neg(&self) -> Self {
        IntMat(self.0.map(|r| r.map(|x| -x)))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// Least n <= cap with self^n = I.
    pub fn order(&self, cap: u32) -> Option<u32> {
        let id = Self::identity();
        let mut p = self.clone();
        for n in 1..=cap {
            if p == id {
                return Some(n);
            }
            p = p.mul(self);
        }
        None
    }

    /// Least n <= cap with self^n = +-I.
    pub fn proj_order(&self, cap: u32) -> Option<u32> {
        let id = Self::identity();
        let mut p = self.clone();
        for n in 1..=cap {
            if p == id || p == id.neg() {
                return Some(n);
            }
            p = p.mul(self);
        }
        None
    }
}

impl<const N: usize> Serialize for IntMat<N> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<i64>> = self.0.iter().map(|r| r.to_vec()).collect();
        rows.serialize(s)
    }
}

impl IntMat6 {
    /// The standard form [[0, I], [-I, 0]].
    pub fn symplectic_form() -> Self {
        IntMat(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if j == i + 3 {
                    1
                } else if i == j + 3 {
                    -1
                } else {
                    0
                }
            })
        }))
    }

    pub fn sp6_member(&self) -> bool {
        let j = Self::symplectic_form();
        self.transpose().mul(&j).mul(self) == j
    }
}

impl IntMat2 {
    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }
}

/// A catalog entry.
#[derive(Clone, Debug)]
pub enum Builtin {
    Proj(ProjMat),
    Int2(IntMat2),
    Int6(IntMat6),
}

/// Names of the PU(2,1) members in the catalog.
pub const PU21_NAMES: &[&str] = &[
    "R", "P", "R1", "R2", "R3", "A1", "Ay", "A0", "Ay0", "g_delta_1", "g_delta_y", "g_delta_0",
    "g_delta_y0", "g_delta_yinf",
];

pub const CATALOG_NAMES: &[&str] = &[
    "R", "P", "R1", "R2", "R3", "A1", "Ay", "A0", "Ay0", "g_delta_1", "g_delta_y", "g_delta_0",
    "g_delta_y0", "g_delta_yinf", "J0", "W", "G1", "G2", "S", "T", "N_sigma0", "N_sigma1", "M",
];

fn proj(name: &str) -> Option<ProjMat> {
    let m = match name {
        "R" => ProjMat::parse_rows([["0", "0", "1"], ["0", "-1", "0"], ["1", "0", "0"]]),
        "P" => ProjMat::parse_rows([["1", "1", "rho"], ["0", "rho", "-rho"], ["0", "0", "1"]]),
        "A1" | "R1" => {
            ProjMat::parse_rows([["1", "0", "0"], ["0", "-rho^2", "0"], ["0", "0", "1"]])
        }
        "Ay" => ProjMat::parse_rows([
            ["1", "1", "rho"],
            ["0", "-rho^2", "rho^2"],
            ["0", "0", "1"],
        ]),
        "A0" => ProjMat::parse_rows([
            ["1", "0", "0"],
            ["rho", "-rho^2", "0"],
            ["rho", "rho", "1"],
        ]),
        "Ay0" => ProjMat::parse_rows([
            ["0", "0", "-rho^2 - 1"],
            ["0", "1", "0"],
            ["-1 - rho^2", "0", "1 - rho^2"],
        ]),
        "R2" => {
            let r = proj("R")?;
            r.mul(&proj("Ay")?).mul(&r)
        }
        "R3" => {
            let r = proj("R")?;
            r.mul(&proj("A0")?).mul(&r)
        }
        "g_delta_1" => {
            ProjMat::parse_rows([["1", "0", "0"], ["0", "rho", "0"], ["0", "0", "1"]])
        }
        "g_delta_y0" => ProjMat::parse_rows([
            ["rho^2", "0", "rho - 1"],
            ["0", "1", "0"],
            ["rho - 1", "0", "-2*rho^2"],
        ]),
        "g_delta_y" => ProjMat::parse_rows([
            ["1", "1 - rho^2", "rho - 1"],
            ["0", "rho", "rho^2 - rho"],
            ["0", "0", "1"],
        ]),
        "g_delta_yinf" => ProjMat::parse_rows([
            ["1", "0", "0"],
            ["0", "1", "0"],
            ["rho - rho^2", "0", "1"],
        ]),
        "g_delta_0" => ProjMat::parse_rows([
            ["1", "0", "0"],
            ["rho - 1", "rho", "0"],
            ["rho - 1", "rho - 1", "1"],
        ]),
        "J0" => j0(),
        "W" => ProjMat::parse_rows([["0", "0", "1"], ["1", "0", "0"], ["0", "1", "0"]]),
        "G1" => ProjMat::parse_rows([
            ["(-1 + i*sqrt3)/2", "0", "0"],
            ["i*(1 + sqrt3)/2", "(-1 + i)/2", "(1 + i)/2"],
            ["(2 + sqrt3)*(1 - i)/2", "(-1 + i)/2", "(-1 - i)/2"],
        ]),
        "G2" => {
            let a = "(-1 + sqrt3 - i - i*sqrt3)/4";
            let b = "(1 + sqrt3 - i + i*sqrt3)/4";
            let c = "(-1 - 3*sqrt3 - i - i*sqrt3)/4";
            let d = "(-3 - sqrt3 + i + i*sqrt3)/4";
            ProjMat::parse_rows([["0", "(-2 + 2*i*sqrt3)/4", "0"], [a, b, a], [c, a, d]])
        }
        _ => return None,
    };
    Some(m)
}

/// Looks up a named matrix.
pub fn builtin(name: &str) -> Result<Builtin, Error> {
    if let Some(m) = proj(name) {
        return Ok(Builtin::Proj(m));
    }
    let s = IntMat([[0, 1], [-1, 0]]);
    let t = IntMat([[1, 1], [0, 1]]);
    Ok(match name {
        "S" => Builtin::Int2(s),
        "T" => Builtin::Int2(t),
        "N_sigma0" => Builtin::Int2(IntMat([[1, 2], [0, 1]])),
        "N_sigma1" => Builtin::Int2(IntMat([[-1, 0], [2, -1]])),
        "M" => Builtin::Int6(IntMat([
            [0, 0, 0, -1, 0, 0],
            [0, 0, 0, 0, -1, 0],
            [0, 0, -1, 0, 0, 1],
            [1, 0, 0, -1, 0, 0],
            [0, 1, 0, 0, -1, 0],
            [0, 0, -1, 0, 0, 0],
        ])),
        _ => return Err(Error::UnknownName(name.to_string())),
    })
}

/// A projective catalog matrix by name.
pub fn named(name: &str) -> Result<ProjMat, Error> {
    proj(name).ok_or_else(|| Error::UnknownName(name.to_string()))
}

pub fn int6(name: &str) -> Result<IntMat6, Error> {
    match builtin(name)? {
        Builtin::Int6(m) => Ok(m),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

pub fn int2(name: &str) -> Result<IntMat2, Error> {
    match builtin(name)? {
        Builtin::Int2(m) => Ok(m),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// A word in named generators, read left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GroupWord {
    pub letters: Vec<(String, i64)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn letter(name: &str, e: i64) -> Self {
        GroupWord {
            letters: vec![(name.to_string(), e)],
        }
    }

    /// Parses e.g. "R3 R1 R2", "P R1^-1 P^-1", "(R3 R2 R1)^4", "[R1, R]".
    /// The empty string and "I" denote the identity.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let toks = tokenize(s)?;
        let mut pos = 0;
        let w = parse_seq(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(Error::Parse(format!("unexpected token in word {s:?}")));
        }
        Ok(w.reduced())
    }

    pub fn concat(&self, o: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend(o.letters.iter().cloned());
        GroupWord { letters }.reduced()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(|(n, e)| (n.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> GroupWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupWord::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Merges adjacent equal letters and drops zero exponents.
    pub fn reduced(&self) -> GroupWord {
        let mut out: Vec<(String, i64)> = Vec::new();
        for (n, e) in &self.letters {
            if n == "I" {
                continue;
            }
            match out.last_mut() {
                Some((m, f)) if m == n => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => {
                    if *e != 0 {
                        out.push((n.clone(), *e));
                    }
                }
            }
        }
        GroupWord { letters: out }
    }

    pub fn len(&self) -> usize {
        self.letters.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Pow(i64),
    Open(char),
    Close(char),
    Comma,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, Error> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() || c == '*' || c == '·' {
            i += 1;
        } else if c == '(' || c == '[' {
            out.push(Tok::Open(c));
            i += 1;
        } else if c == ')' || c == ']' {
            out.push(Tok::Close(c));
            i += 1;
        } else if c == ',' {
            out.push(Tok::Comma);
            i += 1;
        } else if c == '^' {
            i += 1;
            let start = i;
            if i < cs.len() && (cs[i] == '-' || cs[i] == '+') {
                i += 1;
            }
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[start..i].iter().collect();
            let e = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in word {s:?}")))?;
            out.push(Tok::Pow(e));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(cs[start..i].iter().collect()));
        } else {
            return Err(Error::Parse(format!("unexpected {c:?} in word {s:?}")));
        }
    }
    Ok(out)
}

fn parse_seq(toks: &[Tok], pos: &mut usize) -> Result<GroupWord, Error> {
    let mut w = GroupWord::identity();
    while *pos < toks.len() {
        let atom = match &toks[*pos] {
            Tok::Name(n) => {
                *pos += 1;
                GroupWord::letter(n, 1)
            }
            Tok::Open('(') => {
                *pos += 1;
                let inner = parse_seq(toks, pos)?;
                if toks.get(*pos) != Some(&Tok::Close(')')) {
                    return Err(Error::Parse("unbalanced '('".into()));
                }
                *pos += 1;
                inner
            }
            Tok::Open('[') => {
                // commutator [a, b] = a b a^-1 b^-1
                *pos += 1;
                let a = parse_seq(toks, pos)?;
                if toks.get(*pos) != Some(&Tok::Comma) {
                    return Err(Error::Parse("expected ',' in commutator".into()));
                }
                *pos += 1;
                let b = parse_seq(toks, pos)?;
                if toks.get(*pos) != Some(&Tok::Close(']')) {
                    return Err(Error::Parse("unbalanced '['".into()));
                }
                *pos += 1;
                a.concat(&b).concat(&a.inverse()).concat(&b.inverse())
            }
            _ => break,
        };
        let atom = if let Some(Tok::Pow(e)) = toks.get(*pos) {
            *pos += 1;
            atom.pow(*e)
        } else {
            atom
        };
        w = w.concat(&atom);
    }
    Ok(w)
}

/// Evaluates a word over the projective catalog, left to right.
pub fn eval_word(w: &GroupWord) -> Result<ProjMat, Error> {
    let mut cache: BTreeMap<&str, ProjMat> = BTreeMap::new();
    let mut acc = ProjMat::identity();
    for (n, e) in &w.letters {
        if !cache.contains_key(n.as_str()) {
            cache.insert(n, named(n)?);
        }
        acc = acc.mul(&cache[n.as_str()].pow(*e)?);
    }
    Ok(acc)
}

pub fn eval_str(s: &str) -> Result<ProjMat, Error> {
    eval_word(&GroupWord::parse(s)?)
}

/// Least n <= cap with m^n projectively the identity.
pub fn element_order(m: &ProjMat, cap: u32) -> Option<u32> {
    let mut p = m.clone();
    for n in 1..=cap {
        if p.is_proj_identity() {
            return Some(n);
        }
        p = p.mul(m);
    }
    None
}

/// One relation lhs = rhs, checked projectively.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    /// lambda with lhs = lambda * rhs.
    pub scalar: Option<CycNum>,
    /// lhs * rhs^-1 when the check fails.
    pub residual: Option<ProjMat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RelationCheck {
    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

pub fn check_relation(id: &str, lhs: &str, rhs: &str) -> Result<RelationCheck, Error> {
    let a = eval_str(lhs)?;
    let b = eval_str(rhs)?;
    let scalar = a.proj_ratio(&b);
    let pass = scalar.is_some();
    let residual = if pass { None } else { Some(a.mul(&b.inverse()?)) };
    Ok(RelationCheck {
        id: id.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        pass,
        scalar,
        residual,
        note: None,
    })
}

/// The presentation suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Presentation {
    FalbelParkerR123,
    FalbelParkerRpr1,
    Gamma1Identities,
    Squares,
    BracketR,
    Psl2ST,
    S4,
}

impl Presentation {
    pub const ALL: [Presentation; 7] = [
        Presentation::FalbelParkerR123,
        Presentation::FalbelParkerRpr1,
        Presentation::Gamma1Identities,
        Presentation::Squares,
        Presentation::BracketR,
        Presentation::Psl2ST,
        Presentation::S4,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Presentation::FalbelParkerR123 => "falbel_parker_R123",
            Presentation::FalbelParkerRpr1 => "falbel_parker_RPR1",
            Presentation::Gamma1Identities => "gamma1_identities",
            Presentation::Squares => "squares_and_conjugates",
            Presentation::BracketR => "bracket_R",
            Presentation::Psl2ST => "psl2_s_t",
            Presentation::S4 => "s4",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub id: String,
    pub pass: bool,
    pub checks: Vec<RelationCheck>,
    /// Checks that are reported but do not decide `pass` (alternate
    /// transcriptions of a relation whose other reading is checked).
    pub variants: Vec<RelationCheck>,
}

fn rel(id: &str, lhs: &str, rhs: &str) -> RelationCheck {
    check_relation(id, lhs, rhs).expect("catalog words")
}

fn int_check(id: &str, lhs: &str, pass: bool) -> RelationCheck {
    RelationCheck {
        id: id.to_string(),
        lhs: lhs.to_string(),
        rhs: "I".to_string(),
        pass,
        scalar: None,
        residual: None,
        note: None,
    }
}

pub fn verify_presentation(which: Presentation) -> PresentationReport {
    let mut checks = Vec::new();
    let mut variants = Vec::new();
    match which {
        Presentation::FalbelParkerR123 => {
            checks.push(rel("R1^6", "R1^6", "I"));
            checks.push(rel("R2^6", "R2^6", "I"));
            checks.push(rel("R3^6", "R3^6", "I"));
            checks.push(rel("(R3R2R1)^4", "(R3 R2 R1)^4", "I"));
            checks.push(rel("braid_12", "R1 R2 R1", "R2 R1 R2"));
            checks.push(rel("braid_23", "R2 R3 R2", "R3 R2 R3"));
            checks.push(rel("braid_31", "R3 R1 R3", "R1 R3 R1"));
            checks.push(rel("R1R2R3R1", "R1 R2 R3 R1", "R3 R1 R2 R3"));
        }
        Presentation::FalbelParkerRpr1 => {
            checks.push(rel("R^2", "R^2", "I"));
            checks.push(rel("(RP)^6", "(R P)^6", "I"));
            checks.push(rel("R1^6", "R1^6", "I"));
            checks.push(rel("[R1,R]", "[R1, R]", "I"));
            checks.push(rel("pent_P", "P R1^-1 P^-1 R1^-1 P", "I"));
            checks.push(rel("(RP)^3", "(R P)^3", "I"));
            variants.push(
                rel("pent_R", "P R1^-1 P^-1 R1^-1 R", "I")
                    .with_note("form printed in the proof of the pentagon relations"),
            );
        }
        Presentation::Gamma1Identities => {
            checks.push(rel("(R1R2)^3", "(R1 R2)^3", "g_delta_yinf"));
            checks.push(rel(
                "(R1R2R3R2^-1)^2",
                "(R1 R2 R3 R2^-1)^2",
                "R g_delta_1 g_delta_y0 R",
            ));
            checks.push(rel(
                "(R2^2R3R2^-1)^3",
                "(R2^2 R3 R2^-1)^3",
                "R g_delta_0 g_delta_y0 g_delta_y R",
            ));
            checks.push(rel("R1^2", "R1^2", "g_delta_1"));
            checks.push(rel("R2^2", "R2^2", "R g_delta_y R"));
            checks.push(rel("R3^2", "R3^2", "R g_delta_0 R"));
        }
        Presentation::Squares => {
            checks.push(rel("A1^2", "A1^2", "g_delta_1"));
            checks.push(rel("Ay^2", "Ay^2", "g_delta_y"));
            checks.push(rel("A0^2", "A0^2", "g_delta_0"));
            checks.push(rel("Ay0^2", "Ay0^2", "g_delta_y0"));
            checks.push(rel("R2=RAyR", "R2", "R Ay R"));
            checks.push(rel("R3=RA0R", "R3", "R A0 R"));
            checks.push(rel("[A1,R]", "[A1, R]", "I"));
            checks.push(rel("R3=PR1^-1", "R3", "P R1^-1"));
            checks.push(rel("R=(R3R1R2)^2", "(R3 R1 R2)^2", "R"));
        }
        Presentation::BracketR => {
            let verbatim = rel(
                "bracket_verbatim",
                "((R1 R3 R3)^-2 R1 R2 R1^-1 (R1 R2 R3)^-2 R1 R2)^2",
                "R",
            );
            let alternate = rel(
                "bracket_alternate",
                "((R1 R2 R3)^-2 R1 R2 R1^-1 (R1 R2 R3)^-2 R1 R2)^2",
                "R",
            )
            .with_note("first factor read as (R1R2R3)^-2");
            if verbatim.pass {
                checks.push(verbatim);
                variants.push(alternate);
            } else {
                checks.push(alternate);
                variants.push(verbatim);
            }
            checks.push(rel("R=(R3R1R2)^2", "(R3 R1 R2)^2", "R"));
        }
        Presentation::Psl2ST => {
            let s = int2("S").unwrap();
            let t = int2("T").unwrap();
            let st = s.mul(&t);
            let pm = |m: &IntMat2| *m == IntMat2::identity() || *m == IntMat2::identity().neg();
            checks.push(int_check("S^2", "S^2", pm(&s.pow(2))));
            checks.push(int_check("(ST)^3", "(S T)^3", pm(&st.pow(3))));
            let n0 = int2("N_sigma0").unwrap();
            let n1 = int2("N_sigma1").unwrap();
            checks.push(int_check("N_sigma0=T^2", "N_sigma0 T^-2", n0 == t.pow(2)));
            let st2s = s.mul(&t.pow(2)).mul(&s);
            checks.push(int_check(
                "N_sigma1=ST^2S",
                "N_sigma1 (S T^2 S)^-1",
                n1 == st2s || n1 == st2s.neg(),
            ));
            let mod2 = |m: &IntMat2| {
                (0..2).all(|i| (0..2).all(|j| (m.0[i][j] - i64::from(i == j)).rem_euclid(2) == 0))
            };
            checks.push(int_check("N_sigma0=I mod 2", "N_sigma0", mod2(&n0)));
            checks.push(int_check("N_sigma1=I mod 2", "N_sigma1", mod2(&n1)));
        }
        Presentation::S4 => {
            let (s1, s2, s3) = (Perm::transposition(1, 2), Perm::transposition(2, 4), Perm::transposition(3, 4));
            let e = Perm::identity();
            let cases = [
                ("s1^2", s1.compose(&s1)),
                ("s2^2", s2.compose(&s2)),
                ("s3^2", s3.compose(&s3)),
                ("(s1s2)^3", s1.compose(&s2).pow(3)),
                ("(s1s3)^2", s1.compose(&s3).pow(2)),
                ("(s2s3)^3", s2.compose(&s3).pow(3)),
            ];
            for (id, p) in cases {
                checks.push(int_check(id, id, p == e));
            }
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    PresentationReport {
        id: which.id().to_string(),
        pass,
        checks,
        variants,
    }
}

/// A permutation of {1,2,3,4}, stored as images of 1..4.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Perm(pub [u8; 4]);

impl Perm {
    pub fn identity() -> Self {
        Perm([1, 2, 3, 4])
    }

    pub fn transposition(a: u8, b: u8) -> Self {
        let mut p = [1, 2, 3, 4];
        p.swap(a as usize - 1, b as usize - 1);
        Perm(p)
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.0[i as usize - 1]
    }

    /// self after other: (self . other)(i) = self(other(i)).
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(std::array::from_fn(|i| self.apply(other.0[i])))
    }

    pub fn inverse(&self) -> Perm {
        let mut out = [0u8; 4];
        for i in 1..=4u8 {
            out[self.apply(i) as usize - 1] = i;
        }
        Perm(out)
    }

    pub fn pow(&self, e: u32) -> Perm {
        (0..e).fold(Perm::identity(), |acc, _| acc.compose(self))
    }

    pub fn all() -> Vec<Perm> {
        let mut out = Vec::new();
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                for c in 1..=4u8 {
                    for d in 1..=4u8 {
                        let v = [a, b, c, d];
                        let mut s = v;
                        s.sort();
                        if s == [1, 2, 3, 4] {
                            out.push(Perm(v));
                        }
                    }
                }
            }
        }
        out
    }

    /// Cycle notation, e.g. "(12)(34)"; the identity prints as "e".
    pub fn cycles(&self) -> String {
        let mut seen = [false; 4];
        let mut out = String::new();
        for s in 1..=4u8 {
            if seen[s as usize - 1] || self.apply(s) == s {
                continue;
            }
            out.push('(');
            let mut i = s;
            while !seen[i as usize - 1] {
                seen[i as usize - 1] = true;
                out.push(char::from(b'0' + i));
                i = self.apply(i);
            }
            out.push(')');
        }
        if out.is_empty() {
            "e".to_string()
        } else {
            out
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycles())
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.cycles())
    }
}

/// How a word's letters are multiplied in S4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionOrder {
    /// Upsilon(w1 w2) = Upsilon(w1) . Upsilon(w2), the rightmost letter acting first.
    RightToLeft,
    /// Upsilon(w1 w2) = Upsilon(w2) . Upsilon(w1).
    LeftToRight,
}

/// Images of the generators under Upsilon.
pub fn upsilon_letter(name: &str) -> Option<Perm> {
    match name {
        "R1" => Some(Perm::transposition(1, 2)),
        "R2" => Some(Perm::transposition(2, 4)),
        "R3" => Some(Perm::transposition(2, 3)),
        _ => None,
    }
}

/// Words for R and P in R1, R2, R3: R = (R3 R1 R2)^2 and P = R3 R1.
fn expand_letter(name: &str) -> Option<GroupWord> {
    match name {
        "R1" | "R2" | "R3" => Some(GroupWord::letter(name, 1)),
        "R" => GroupWord::parse("(R3 R1 R2)^2").ok(),
        "P" => GroupWord::parse("R3 R1").ok(),
        _ => None,
    }
}

pub fn upsilon_with(w: &GroupWord, order: CompositionOrder) -> Result<Perm, Error> {
    let mut acc = Perm::identity();
    for (n, e) in &w.letters {
        let sub = expand_letter(n).ok_or_else(|| Error::UnknownName(n.clone()))?;
        let mut p = Perm::identity();
        for (m, f) in &sub.letters {
            let g = upsilon_letter(m).unwrap();
            let g = if *f < 0 { g.inverse() } else { g };
            for _ in 0..f.unsigned_abs() {
                p = match order {
                    CompositionOrder::RightToLeft => p.compose(&g),
                    CompositionOrder::LeftToRight => g.compose(&p),
                };
            }
        }
        let p = if *e < 0 { p.inverse() } else { p };
        for _ in 0..e.unsigned_abs() {
            acc = match order {
                CompositionOrder::RightToLeft => acc.compose(&p),
                CompositionOrder::LeftToRight => p.compose(&acc),
            };
        }
    }
    Ok(acc)
}

/// The composition order under which every relation of the R1,R2,R3
/// presentation maps to the identity; RightToLeft is tried first.
pub fn upsilon_convention() -> CompositionOrder {
    static ORDER: std::sync::OnceLock<CompositionOrder> = std::sync::OnceLock::new();
    *ORDER.get_or_init(|| {
        let rels = r123_relation_words();
        for order in [CompositionOrder::RightToLeft, CompositionOrder::LeftToRight] {
            if rels
                .iter()
                .all(|w| upsilon_with(w, order).map(|p| p == Perm::identity()).unwrap_or(false))
            {
                return order;
            }
        }
        CompositionOrder::RightToLeft
    })
}

/// Relators (words equal to I) of the R1,R2,R3 presentation.
pub fn r123_relation_words() -> Vec<GroupWord> {
    [
        "R1^6",
        "R2^6",
        "R3^6",
        "(R3 R2 R1)^4",
        "R1 R2 R1 (R2 R1 R2)^-1",
        "R2 R3 R2 (R3 R2 R3)^-1",
        "R3 R1 R3 (R1 R3 R1)^-1",
        "R1 R2 R3 R1 (R3 R1 R2 R3)^-1",
    ]
    .iter()
    .map(|s| GroupWord::parse(s).unwrap())
    .collect()
}

pub fn upsilon(w: &GroupWord) -> Result<Perm, Error> {
    upsilon_with(w, upsilon_convention())
}

/// Values of lambda under the anharmonic group.
#[derive(Clone, Debug, Serialize)]
pub struct AnharmonicOrbit {
    pub values: Vec<CycNum>,
    pub distinct: usize,
    pub degenerate: bool,
}

pub fn anharmonic_orbit(lambda: &CycNum) -> Result<AnharmonicOrbit, Error> {
    let one = CycNum::one();
    if lambda.is_zero() || *lambda == one {
        return Err(Error::Domain("lambda must avoid 0, 1, infinity".into()));
    }
    let l = lambda.clone();
    let values = vec![
        l.clone(),
        &one - &l,
        (&one - &l).inv()?,
        &l / &(&l - &one),
        l.inv()?,
        &(&l - &one) / &l,
    ];
    let mut uniq: Vec<&CycNum> = Vec::new();
    for v in &values {
        if !uniq.contains(&v) {
            uniq.push(v);
        }
    }
    let distinct = uniq.len();
    Ok(AnharmonicOrbit {
        values,
        distinct,
        degenerate: distinct < 6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_examples() {
        assert_eq!(
            named("R").unwrap(),
            ProjMat::parse_rows([["0", "0", "1"], ["0", "-1", "0"], ["1", "0", "0"]])
        );
        assert_eq!(
            named("g_delta_1").unwrap(),
            ProjMat::parse_rows([["1", "0", "0"], ["0", "rho", "0"], ["0", "0", "1"]])
        );
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn members() {
        for n in PU21_NAMES {
            let g = named(n).unwrap();
            assert!(g.pu21_member(), "{n}");
            assert!(g.det().is_unit_root(), "{n}");
        }
        assert!(ProjMat::identity().pu21_member());
        let d = ProjMat::parse_rows([["2", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]);
        assert!(!d.pu21_member());
    }

    #[test]
    fn orders() {
        assert_eq!(element_order(&named("R").unwrap(), 24), Some(2));
        assert_eq!(element_order(&named("R1").unwrap(), 24), Some(6));
        let m = int6("M").unwrap();
        assert!(m.sp6_member());
        let o = m.order(24).unwrap();
        assert!(m.pow(o) == IntMat6::identity());
        assert!((1..o).all(|k| m.pow(k) != IntMat6::identity()));
    }

    #[test]
    fn word_parsing() {
        let w = GroupWord::parse("(R3 R2 R1)^2 R1^-1").unwrap();
        assert_eq!(w.to_string(), "R3 R2 R1 R3 R2");
        assert_eq!(GroupWord::parse("[R1, R]").unwrap().to_string(), "R1 R R1^-1 R^-1");
        assert!(GroupWord::parse("R1 (R2").is_err());
        assert!(eval_str("R1 R1^-1").unwrap().is_proj_identity());
        assert!(eval_str("R R").unwrap().is_proj_identity());
        assert!(eval_str("R3 R1 R2 R3 R1 R2").unwrap().proj_eq(&named("R").unwrap()));
    }

    #[test]
    fn inverse_matches_adjugate() {
        for n in PU21_NAMES {
            let g = named(n).unwrap();
            let u = g.unitary_inverse();
            let a = g.adjugate().scale(&g.det().inv().unwrap());
            assert!(u.proj_eq(&a), "{n}");
        }
    }

    #[test]
    fn anharmonic() {
        let o = anharmonic_orbit(&CycNum::from_int(2)).unwrap();
        assert!(o.degenerate);
        assert_eq!(o.distinct, 3);
        let o = anharmonic_orbit(&CycNum::from_int(3)).unwrap();
        assert!(!o.degenerate);
        let o = anharmonic_orbit(&-CycNum::rho().pow(2)).unwrap();
        assert_eq!(o.distinct, 2);
        assert!(anharmonic_orbit(&CycNum::one()).is_err());
    }

    #[test]
    fn perm_basics() {
        let s = Perm::transposition(1, 2);
        assert_eq!(s.compose(&s), Perm::identity());
        assert_eq!(Perm::all().len(), 24);
        assert_eq!(Perm::transposition(2, 4).cycles(), "(24)");
    }
}
