//! The grid tiling problem: instances, tilings, a brute-force solver and the
//! reduction to a determinacy instance.
//!
//! Grid convention: `u(0,0)` is bottom-left, horizontal edges point right
//! (`u(i,j) -> u(i+1,j)`), vertical edges point up (`u(i,j) -> u(i,j+1)`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{
    is_shade_name, parse_regex, Alphabet, Direction, GridLetter, Parity, Regex, Symbol, Temperature,
};
use crate::instance::{Instance, InstanceError, InstanceFile, Views, ViewsFile};

pub const BLACK: &str = "black";

/// Largest candidate count [`solve_bruteforce`] agrees to enumerate for one grid size.
pub const MAX_CANDIDATES: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OgtpError {
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
    #[error("malformed tiling: {0}")]
    MalformedTiling(String),
    #[error("grid size {n} needs {candidates} candidates, above the limit of {MAX_CANDIDATES}")]
    SearchSpaceTooLarge { n: usize, candidates: u128 },
}

/// A direction-tagged shade, e.g. `(H, black)`.
pub type Tag = (Direction, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OgtpInstance {
    pub shades: Vec<String>,
    #[serde(default)]
    pub forbidden: Vec<(Tag, Tag)>,
}

impl OgtpInstance {
    pub fn new(shades: &[&str], forbidden: Vec<(Tag, Tag)>) -> Result<OgtpInstance, OgtpError> {
        let inst = OgtpInstance {
            shades: shades.iter().map(|s| s.to_string()).collect(),
            forbidden,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), OgtpError> {
        let bad = |m: String| Err(OgtpError::MalformedInstance(m));
        if !self.shades.iter().any(|s| s == BLACK) {
            return bad("shade set must contain black".into());
        }
        let mut seen = BTreeSet::new();
        for s in &self.shades {
            if !is_shade_name(s) {
                return bad(format!("invalid shade name '{s}'"));
            }
            if !seen.insert(s) {
                return bad(format!("duplicate shade '{s}'"));
            }
        }
        for ((_, s1), (_, s2)) in &self.forbidden {
            for s in [s1, s2] {
                if !seen.contains(s) {
                    return bad(format!("forbidden pair uses unknown shade '{s}'"));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<OgtpInstance, OgtpError> {
        let inst: OgtpInstance =
            serde_json::from_str(text).map_err(|e| OgtpError::MalformedInstance(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    /// Every ordered pair of direction-tagged shades, i.e. the fully forbidding instance.
    pub fn all_pairs(shades: &[&str]) -> Vec<(Tag, Tag)> {
        let tags: Vec<Tag> = [Direction::H, Direction::V]
            .into_iter()
            .flat_map(|d| shades.iter().map(move |s| (d, s.to_string())))
            .collect();
        tags.iter()
            .flat_map(|t1| tags.iter().map(move |t2| (t1.clone(), t2.clone())))
            .collect()
    }
}

/// Shades of an `n x n` grid: `h[(i,j)]` on `u(i,j) -> u(i+1,j)`, `v[(i,j)]` on `u(i,j) -> u(i,j+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridTiling {
    pub n: usize,
    pub h: BTreeMap<(usize, usize), String>,
    pub v: BTreeMap<(usize, usize), String>,
}

#[derive(Serialize, Deserialize)]
struct TilingJson {
    n: usize,
    h: BTreeMap<String, String>,
    v: BTreeMap<String, String>,
}

fn cell_key((i, j): (usize, usize)) -> String {
    format!("{i},{j}")
}

fn parse_cell(key: &str) -> Option<(usize, usize)> {
    let (i, j) = key.split_once(',')?;
    Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
}

impl GridTiling {
    pub fn uniform(n: usize, shade: &str) -> GridTiling {
        let h = h_cells(n).map(|c| (c, shade.to_string())).collect();
        let v = v_cells(n).map(|c| (c, shade.to_string())).collect();
        GridTiling { n, h, v }
    }

    pub fn h_label(&self, i: usize, j: usize) -> Option<&str> {
        self.h.get(&(i, j)).map(String::as_str)
    }

    pub fn v_label(&self, i: usize, j: usize) -> Option<&str> {
        self.v.get(&(i, j)).map(String::as_str)
    }

    /// Checks that exactly the cells of an `n x n` grid are present.
    pub fn validate(&self) -> Result<(), OgtpError> {
        if self.n == 0 {
            return Err(OgtpError::MalformedTiling("grid size must be at least 1".into()));
        }
        let expect_h: BTreeSet<_> = h_cells(self.n).collect();
        let expect_v: BTreeSet<_> = v_cells(self.n).collect();
        for (name, map, expect) in [("h", &self.h, expect_h), ("v", &self.v, expect_v)] {
            let have: BTreeSet<_> = map.keys().copied().collect();
            if let Some(c) = expect.difference(&have).next() {
                return Err(OgtpError::MalformedTiling(format!("missing {name} cell {}", cell_key(*c))));
            }
            if let Some(c) = have.difference(&expect).next() {
                return Err(OgtpError::MalformedTiling(format!("unexpected {name} cell {}", cell_key(*c))));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc = TilingJson {
            n: self.n,
            h: self.h.iter().map(|(c, s)| (cell_key(*c), s.clone())).collect(),
            v: self.v.iter().map(|(c, s)| (cell_key(*c), s.clone())).collect(),
        };
        serde_json::to_string(&doc).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<GridTiling, OgtpError> {
        let doc: TilingJson =
            serde_json::from_str(text).map_err(|e| OgtpError::MalformedTiling(e.to_string()))?;
        let cells = |m: BTreeMap<String, String>| {
            m.into_iter()
                .map(|(k, s)| {
                    parse_cell(&k)
                        .map(|c| (c, s))
                        .ok_or_else(|| OgtpError::MalformedTiling(format!("bad cell key '{k}'")))
                })
                .collect::<Result<BTreeMap<_, _>, _>>()
        };
        let t = GridTiling {
            n: doc.n,
            h: cells(doc.h)?,
            v: cells(doc.v)?,
        };
        t.validate()?;
        Ok(t)
    }
}

impl fmt::Display for GridTiling {
    /// Rows from top (`j = n`) to bottom; `h(i,j)` and `v(i,j)` per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        for ((i, j), s) in &self.h {
            writeln!(f, "h {i},{j} {s}")?;
        }
        for ((i, j), s) in &self.v {
            writeln!(f, "v {i},{j} {s}")?;
        }
        Ok(())
    }
}

fn h_cells(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..=n).map(move |j| (i, j)))
}

fn v_cells(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

/// Which tiling condition fails first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TilingViolation {
    UnknownShade { direction: Direction, cell: (usize, usize), shade: String },
    BottomLeftNotBlack,
    UpperRightNotBlack,
    ForbiddenPath { at: (usize, usize), first: Tag, second: Tag },
}

impl fmt::Display for TilingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TilingViolation::UnknownShade { direction, cell, shade } => {
                write!(f, "{direction:?} edge at {} has unknown shade '{shade}'", cell_key(*cell))
            }
            TilingViolation::BottomLeftNotBlack => write!(f, "bottom-left vertical edge is not black"),
            TilingViolation::UpperRightNotBlack => write!(f, "upper-right horizontal edge is not black"),
            TilingViolation::ForbiddenPath { at, first, second } => write!(
                f,
                "forbidden path ({:?},{}) ({:?},{}) through {}",
                first.0,
                first.1,
                second.0,
                second.1,
                cell_key(*at)
            ),
        }
    }
}

/// Every directed length-2 path `(incoming tag, outgoing tag, middle vertex)`, in vertex order.
pub fn length_two_paths(t: &GridTiling) -> Vec<(Tag, Tag, (usize, usize))> {
    let n = t.n;
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let mut incoming = Vec::new();
            if i > 0 {
                if let Some(s) = t.h_label(i - 1, j) {
                    incoming.push((Direction::H, s.to_string()));
                }
            }
            if j > 0 {
                if let Some(s) = t.v_label(i, j - 1) {
                    incoming.push((Direction::V, s.to_string()));
                }
            }
            let mut outgoing = Vec::new();
            if i < n {
                if let Some(s) = t.h_label(i, j) {
                    outgoing.push((Direction::H, s.to_string()));
                }
            }
            if j < n {
                if let Some(s) = t.v_label(i, j) {
                    outgoing.push((Direction::V, s.to_string()));
                }
            }
            for a in &incoming {
                for b in &outgoing {
                    out.push((a.clone(), b.clone(), (i, j)));
                }
            }
        }
    }
    out
}

pub fn tiling_violation(
    inst: &OgtpInstance,
    t: &GridTiling,
) -> Result<Option<TilingViolation>, OgtpError> {
    t.validate()?;
    for (direction, map) in [(Direction::H, &t.h), (Direction::V, &t.v)] {
        if let Some((cell, shade)) = map.iter().find(|(_, s)| !inst.shades.contains(s)) {
            return Ok(Some(TilingViolation::UnknownShade {
                direction,
                cell: *cell,
                shade: shade.clone(),
            }));
        }
    }
    if t.v_label(0, 0) != Some(BLACK) {
        return Ok(Some(TilingViolation::BottomLeftNotBlack));
    }
    if t.h_label(t.n - 1, t.n) != Some(BLACK) {
        return Ok(Some(TilingViolation::UpperRightNotBlack));
    }
    let forbidden: BTreeSet<&(Tag, Tag)> = inst.forbidden.iter().collect();
    for (first, second, at) in length_two_paths(t) {
        if forbidden.contains(&(first.clone(), second.clone())) {
            return Ok(Some(TilingViolation::ForbiddenPath { at, first, second }));
        }
    }
    Ok(None)
}

pub fn check_tiling(inst: &OgtpInstance, t: &GridTiling) -> Result<bool, OgtpError> {
    Ok(tiling_violation(inst, t)?.is_none())
}

/// The first solution with the smallest `n <= max_n`, enumerating shade assignments
/// in odometer order over the instance's shade order.
pub fn solve_bruteforce(inst: &OgtpInstance, max_n: usize) -> Result<Option<GridTiling>, OgtpError> {
    inst.validate()?;
    let k = inst.shades.len();
    for n in 1..=max_n {
        let cells: Vec<(Direction, (usize, usize))> = h_cells(n)
            .map(|c| (Direction::H, c))
            .chain(v_cells(n).map(|c| (Direction::V, c)))
            .collect();
        let candidates = (k as u128).checked_pow(cells.len() as u32).unwrap_or(u128::MAX);
        if candidates > MAX_CANDIDATES {
            return Err(OgtpError::SearchSpaceTooLarge { n, candidates });
        }
        let mut digits = vec![0usize; cells.len()];
        loop {
            let mut t = GridTiling {
                n,
                h: BTreeMap::new(),
                v: BTreeMap::new(),
            };
            for (&(d, c), &s) in cells.iter().zip(&digits) {
                let map = if d == Direction::H { &mut t.h } else { &mut t.v };
                map.insert(c, inst.shades[s].clone());
            }
            if check_tiling(inst, &t)? {
                return Ok(Some(t));
            }
            let Some(pos) = digits.iter().rposition(|&d| d + 1 < k) else {
                break;
            };
            digits[pos] += 1;
            digits[pos + 1..].iter_mut().for_each(|d| *d = 0);
        }
    }
    Ok(None)
}

/// The compiled instance: alphabet, view groups, `Q_start` and `Q0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionOutput {
    pub alphabet: Alphabet,
    pub views: Views,
    pub q_start: Regex,
    pub q0: Regex,
}

pub const Q_START: &str = "alpha ([A,H,C,*] [B,V,C,*])^+ omega";

pub const GOOD: [&str; 8] = [
    "omega",
    "alpha + beta",
    "[B,H,W,*] [A,V,W,*] + [B,V,C,*] [A,H,C,*]",
    "[A,H,C,*] [B,V,C,*] + [A,V,W,*] [B,H,W,*]",
    "[B,V,C,*] + [B,V,W,*]",
    "[B,H,W,*] + [B,H,C,*]",
    "[A,V,W,*] + [A,V,C,*]",
    "[A,H,C,*] + [A,H,W,*]",
];

pub const UGLY: [&str; 2] = [
    "alpha S0* [*,*,W,*] S0* omega",
    "beta S0* [*,*,C,*] S0* omega",
];

/// `Q_bad` texts: two boundary languages, then one per forbidden pair.
pub fn bad_texts(inst: &OgtpInstance) -> Vec<String> {
    let others: Vec<&String> = inst.shades.iter().filter(|s| *s != BLACK).collect();
    let choice = |pattern: &dyn Fn(&str) -> String| {
        others.iter().map(|s| pattern(s)).collect::<Vec<_>>().join(" + ")
    };
    let mut out = Vec::new();
    if others.is_empty() {
        out.push("empty".to_string());
        out.push("empty".to_string());
    } else {
        out.push(format!("beta ({}) S0* omega", choice(&|s| format!("[A,V,W,{s}]"))));
        out.push(format!("beta S0* ({}) omega", choice(&|s| format!("[B,H,W,{s}]"))));
    }
    for ((d1, s1), (d2, s2)) in &inst.forbidden {
        out.push(format!(
            "beta S0* [*,{},W,{s1}] [*,{},W,{s2}] S0* omega",
            d1.letter(),
            d2.letter()
        ));
    }
    out
}

/// `alpha`, `beta`, `omega`, then the grid letters `T-D-K-S` (shade innermost).
/// With `shades = None` the letters are shade-less `T-D-K`.
pub fn sigma(shades: Option<&[String]>) -> Alphabet {
    let mut tokens: Vec<String> = vec!["alpha".into(), "beta".into(), "omega".into()];
    for parity in [Parity::A, Parity::B] {
        for direction in [Direction::H, Direction::V] {
            for temperature in [Temperature::Warm, Temperature::Cold] {
                let letter = |shade| GridLetter {
                    parity,
                    direction,
                    temperature,
                    shade,
                };
                match shades {
                    Some(ss) => tokens.extend(ss.iter().map(|s| letter(Some(s)).token())),
                    None => tokens.push(letter(None).token()),
                }
            }
        }
    }
    Alphabet::from_tokens(&tokens).expect("distinct tokens")
}

fn parse_all<S: AsRef<str>>(texts: &[S], alphabet: &Alphabet) -> Vec<Regex> {
    texts
        .iter()
        .map(|t| parse_regex(t.as_ref(), alphabet).expect("reduction texts are well formed"))
        .collect()
}

pub fn compile_reduction(inst: &OgtpInstance) -> Result<ReductionOutput, OgtpError> {
    inst.validate()?;
    let alphabet = sigma(Some(&inst.shades));
    let views = Views {
        good: parse_all(&GOOD, &alphabet),
        bad: parse_all(&bad_texts(inst), &alphabet),
        ugly: parse_all(&UGLY, &alphabet),
    };
    let q_start = parse_regex(Q_START, &alphabet).expect("well formed");
    let q0 = Regex::union_all(
        std::iter::once(q_start.clone())
            .chain(views.ugly.iter().cloned())
            .chain(views.bad.iter().cloned()),
    );
    Ok(ReductionOutput {
        alphabet,
        views,
        q_start,
        q0,
    })
}

/// The good and ugly views over the shade-less alphabet; they do not mention shades.
pub fn shadeless_views() -> (Alphabet, Views) {
    let alphabet = sigma(None);
    let views = Views {
        good: parse_all(&GOOD, &alphabet),
        bad: Vec::new(),
        ugly: parse_all(&UGLY, &alphabet),
    };
    (alphabet, views)
}

impl ReductionOutput {
    pub fn to_file(&self) -> InstanceFile {
        let a = &self.alphabet;
        let texts = |rs: &[Regex]| rs.iter().map(|r| r.to_text(a)).collect();
        InstanceFile {
            alphabet: a.symbols().iter().map(|s| s.name().to_string()).collect(),
            q_start: Some(self.q_start.to_text(a)),
            q0: self.q0.to_text(a),
            views: ViewsFile {
                good: texts(&self.views.good),
                bad: texts(&self.views.bad),
                ugly: texts(&self.views.ugly),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<ReductionOutput, InstanceError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| InstanceError::Malformed(e.to_string()))?;
        let alphabet = Alphabet::from_tokens(&file.alphabet)?;
        let q_start = file
            .q_start
            .as_deref()
            .ok_or_else(|| InstanceError::Malformed("missing q_start".into()))?;
        let parse = |ts: &[String]| {
            ts.iter()
                .map(|t| parse_regex(t, &alphabet))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(ReductionOutput {
            views: Views {
                good: parse(&file.views.good)?,
                bad: parse(&file.views.bad)?,
                ugly: parse(&file.views.ugly)?,
            },
            q_start: parse_regex(q_start, &alphabet)?,
            q0: parse_regex(&file.q0, &alphabet)?,
            alphabet,
        })
    }

    pub fn instance(&self) -> Result<Instance, InstanceError> {
        Instance::new(
            self.alphabet.clone(),
            self.views.clone(),
            Some(self.q_start.clone()),
            self.q0.clone(),
        )
    }
}

/// Grid letter symbol with the given fields, e.g. `G:A-H-C-black`.
pub fn grid_symbol(
    color: Option<crate::automata::Color>,
    parity: Parity,
    direction: Direction,
    temperature: Temperature,
    shade: Option<&str>,
) -> Symbol {
    let token = GridLetter {
        parity,
        direction,
        temperature,
        shade,
    }
    .token();
    let prefix = color.map(|c| c.prefix()).unwrap_or("");
    Symbol::parse(&format!("{prefix}{token}")).expect("well-formed grid token")
}
