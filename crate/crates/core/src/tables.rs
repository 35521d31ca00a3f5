//! Audits of closed-form component tables against the brute-force pipeline.
//!
//! Basic tables (`R`, `Ricc`, `g∧Ricc`, `C`, `τ`, `ρ`) come from
//! [`closed_form_table`]. Derived (0,6)-tables are transcribed in a small text
//! format (see `data/derived_tables.txt`) and parsed at run time.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::classify::{TensorCache, TensorId};
use crate::crosscheck::OperatorRoute;
use crate::error::Error;
use crate::expr::Expr;
use crate::scalar::{Rational, Scalar};
use crate::tensor::Tensor;
use crate::wintgen::{choi_lu_shape_ops, closed_form_table, entry_instances, ChoiLuParams};

/// The transcribed derived tables.
pub const DERIVED_TABLES: &str = include_str!("../data/derived_tables.txt");

/// One disagreement between a closed form and the brute-force value.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrataRow {
    /// Entry name or formula pattern, e.g. `R_1ii1` or `RC(1,2,Z,W;1,i)`.
    pub label: String,
    /// 1-based index tuple.
    pub index: Vec<usize>,
    pub closed_form: Rational,
    pub brute: Rational,
    pub params: ChoiLuParams<Rational>,
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

/// Check every named entry of the basic table at one point.
pub fn audit_basic(p: &ChoiLuParams<Rational>) -> Result<Vec<ErrataRow>, Error> {
    let model = choi_lu_shape_ops(p)?;
    let cache = TensorCache::new(&model);
    let cv = cache.curvature();
    let gw = cache.get(TensorId::GwRicc);
    let table = closed_form_table(p);
    let n = p.n as i64;
    let mut rows = Vec::new();
    for (name, want) in table.entries() {
        for idx in entry_instances(name, p.n) {
            let got = match name.split('_').next().expect("named") {
                "R" => cv.r.get(&idx).clone(),
                "S" => cv.ricci.ricc.get(idx[0], idx[1]).clone(),
                "gwR" => gw.get(&idx).clone(),
                "C" => cv.c.get(&idx).clone(),
                "tau" => cv.ricci.tau.clone(),
                "rho" => cv.ricci.tau.checked_div(&Rational::from_i64(n * (n - 1)))?,
                _ => unreachable!("entry names are fixed"),
            };
            if &got != want {
                rows.push(ErrataRow { label: name.to_string(), index: one_based(&idx), closed_form: want.clone(), brute: got, params: p.clone() });
            }
        }
    }
    Ok(rows)
}

/// A component outside the listed entries (and their symmetry images) that
/// is nonzero although the table lists no value for it.
#[derive(Clone, Debug, PartialEq)]
pub struct NullityRow {
    pub tensor: &'static str,
    pub index: Vec<usize>,
    pub value: Rational,
    pub params: ChoiLuParams<Rational>,
}

/// Images of `(x1,x2,x3,x4)` under the curvature-tensor symmetries.
fn orbit4(i: &[usize]) -> [[usize; 4]; 8] {
    let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
    [[a, b, c, d], [b, a, c, d], [a, b, d, c], [b, a, d, c], [c, d, a, b], [d, c, a, b], [c, d, b, a], [d, c, b, a]]
}

/// The tables state that every unlisted component vanishes; check that.
pub fn audit_nullity(p: &ChoiLuParams<Rational>) -> Result<Vec<NullityRow>, Error> {
    let model = choi_lu_shape_ops(p)?;
    let cache = TensorCache::new(&model);
    let listed = |prefix: &str| -> Vec<[usize; 4]> {
        let names: &[&str] = match prefix {
            "R" => &["R_1221", "R_1ii1", "R_2ii2", "R_ijji", "R_1ii2"],
            "gwR" => &["gwR_1221", "gwR_1ii1", "gwR_2ii2", "gwR_ijji"],
            _ => &["C_1221", "C_1ii1", "C_2ii2", "C_ijji"],
        };
        names.iter().flat_map(|nm| entry_instances(nm, p.n)).flat_map(|i| orbit4(&i)).collect()
    };
    let mut rows = Vec::new();
    for (tensor, prefix, id) in [("R", "R", TensorId::R), ("g∧Ricc", "gwR", TensorId::GwRicc), ("C", "C", TensorId::C)] {
        let cover = listed(prefix);
        cache.get(id).for_each_nonzero(|idx, v| {
            if !cover.iter().any(|c| c[..] == idx[..]) {
                rows.push(NullityRow { tensor, index: one_based(idx), value: v.clone(), params: p.clone() });
            }
        });
    }
    let s = &cache.curvature().ricci.ricc;
    for u in 0..p.n {
        for v in 0..p.n {
            let listed = u == v || (u.min(v), u.max(v)) == (0, 1);
            if !listed && !s.get(u, v).is_zero() {
                rows.push(NullityRow { tensor: "Ricc", index: vec![u + 1, v + 1], value: s.get(u, v).clone(), params: p.clone() });
            }
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Derived tables

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// A fixed basis vector (0-based).
    Fixed(usize),
    /// An index `≥ 3`, distinct from other symbols on the line.
    Sym(char),
    /// A free basis vector.
    Free(char),
}

impl Slot {
    fn parse(t: &str) -> Result<Slot, Error> {
        match t {
            "1" => Ok(Slot::Fixed(0)),
            "2" => Ok(Slot::Fixed(1)),
            "i" | "j" | "k" => Ok(Slot::Sym(t.chars().next().expect("nonempty"))),
            "X" | "Y" => Ok(Slot::Free(t.chars().next().expect("nonempty"))),
            _ => Err(Error::Parse(format!("bad slot `{t}`"))),
        }
    }

    fn show(self) -> String {
        match self {
            Slot::Fixed(i) => (i + 1).to_string(),
            Slot::Sym(c) | Slot::Free(c) => c.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: Expr,
    pub wedge: (Slot, Slot),
}

/// One transcribed formula: `T(s1, s2, Z, W; s3, s4) = Σ coef <(E_p∧E_q)Z, W>`.
#[derive(Clone, Debug, PartialEq)]
pub struct TableLine {
    pub line_no: usize,
    pub tensor: TensorId,
    pub slots: [Slot; 4],
    pub terms: Vec<Term>,
}

impl TableLine {
    pub fn label(&self) -> String {
        let s = self.slots.map(Slot::show);
        format!("{}({},{},Z,W;{},{})", self.tensor.code(), s[0], s[1], s[2], s[3])
    }

    fn symbols(&self) -> (Vec<char>, Vec<char>) {
        let mut sym = Vec::new();
        let mut free = Vec::new();
        let all = self.slots.iter().chain(self.terms.iter().flat_map(|t| [&t.wedge.0, &t.wedge.1]));
        for s in all {
            match *s {
                Slot::Sym(c) if !sym.contains(&c) => sym.push(c),
                Slot::Free(c) if !free.contains(&c) => free.push(c),
                _ => {}
            }
        }
        (sym, free)
    }
}

fn parse_line(line_no: usize, line: &str) -> Result<TableLine, Error> {
    let err = |m: &str| Error::Parse(format!("table line {line_no}: {m}"));
    let (lhs, rhs) = line.split_once('=').ok_or_else(|| err("missing `=`"))?;
    let (head, tail) = lhs.split_once(';').ok_or_else(|| err("missing `;`"))?;
    let mut head = head.split_whitespace();
    let tensor = TensorId::parse(head.next().ok_or_else(|| err("missing tensor"))?)?;
    let toks: Vec<&str> = head.chain(tail.split_whitespace()).collect();
    if toks.len() != 4 {
        return Err(err("expected four slots"));
    }
    let slots = [Slot::parse(toks[0])?, Slot::parse(toks[1])?, Slot::parse(toks[2])?, Slot::parse(toks[3])?];
    let rhs = rhs.trim();
    let mut terms = Vec::new();
    if rhs != "0" {
        let mut rest = rhs;
        while !rest.trim().is_empty() {
            let open = rest.find('[').ok_or_else(|| err("term without `[p q]`"))?;
            let close = rest[open..].find(']').ok_or_else(|| err("unclosed `[`"))? + open;
            let coef = Expr::parse(&rest[..open])?;
            let ws: Vec<&str> = rest[open + 1..close].split_whitespace().collect();
            if ws.len() != 2 {
                return Err(err("wedge needs two slots"));
            }
            terms.push(Term { coef, wedge: (Slot::parse(ws[0])?, Slot::parse(ws[1])?) });
            rest = &rest[close + 1..];
        }
    }
    Ok(TableLine { line_no, tensor, slots, terms })
}

/// Parse a table file; blank lines and `#` comments are skipped.
pub fn parse_tables(src: &str) -> Result<Vec<TableLine>, Error> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_line(i + 1, l))
        .collect()
}

pub fn derived_tables() -> Vec<TableLine> {
    parse_tables(DERIVED_TABLES).expect("bundled tables parse")
}

/// Injective maps of `syms` into `2..n` (0-based indices ≥ 3).
fn assignments(syms: &[char], free: &[char], n: usize) -> Vec<Vec<(char, usize)>> {
    let mut out = vec![Vec::new()];
    for &c in syms {
        let mut next = Vec::new();
        for a in &out {
            for v in 2..n {
                if a.iter().all(|&(_, u)| u != v) {
                    let mut b = a.clone();
                    b.push((c, v));
                    next.push(b);
                }
            }
        }
        out = next;
    }
    for &c in free {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..n).map(move |v| {
                    let mut b = a.clone();
                    b.push((c, v));
                    b
                })
            })
            .collect();
    }
    out
}

fn resolve(s: Slot, asg: &[(char, usize)]) -> usize {
    match s {
        Slot::Fixed(i) => i,
        Slot::Sym(c) | Slot::Free(c) => asg.iter().find(|(d, _)| *d == c).expect("assigned").1,
    }
}

/// Variable environment of a Choi–Lu point.
pub fn env(p: &ChoiLuParams<Rational>) -> impl Fn(&str) -> Option<Rational> + '_ {
    move |v| match v {
        "a" => Some(p.a.clone()),
        "b" => Some(p.b.clone()),
        "c" => Some(p.c.clone()),
        "mu" => Some(p.mu.clone()),
        "kt" => Some(p.k_tilde.clone()),
        "H2" => Some(p.h_sq()),
        "n" => Some(Rational::from_i64(p.n as i64)),
        _ => None,
    }
}

fn wedge_val(p: usize, q: usize, z: usize, w: usize) -> i64 {
    (q == z && p == w) as i64 - (p == z && q == w) as i64
}

/// Compare each line with `tensor_of(line.tensor)` for all index choices.
pub fn audit_lines_with<'t>(
    lines: &[TableLine],
    p: &ChoiLuParams<Rational>,
    tensor_of: &dyn Fn(TensorId) -> &'t Tensor<Rational>,
) -> Result<Vec<ErrataRow>, Error> {
    let n = p.n;
    let e = env(p);
    let mut rows = Vec::new();
    for line in lines {
        let coefs: Vec<Rational> = line.terms.iter().map(|t| t.coef.eval(&e)).collect::<Result<_, _>>()?;
        let t = tensor_of(line.tensor);
        let (syms, free) = line.symbols();
        for asg in assignments(&syms, &free, n) {
            let s = line.slots.map(|s| resolve(s, &asg));
            let wedges: Vec<(usize, usize)> = line.terms.iter().map(|t| (resolve(t.wedge.0, &asg), resolve(t.wedge.1, &asg))).collect();
            for z in 0..n {
                for w in 0..n {
                    let mut want = Rational::zero();
                    for (c, &(a, b)) in coefs.iter().zip(&wedges) {
                        match wedge_val(a, b, z, w) {
                            0 => {}
                            1 => want += c.clone(),
                            _ => want -= c.clone(),
                        }
                    }
                    let idx = [s[0], s[1], z, w, s[2], s[3]];
                    let got = t.get(&idx);
                    if *got != want {
                        rows.push(ErrataRow { label: line.label(), index: one_based(&idx), closed_form: want, brute: got.clone(), params: p.clone() });
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Audit all bundled derived tables at one point.
pub fn audit_derived(p: &ChoiLuParams<Rational>, lines: &[TableLine]) -> Result<Vec<ErrataRow>, Error> {
    let model = choi_lu_shape_ops(p)?;
    let cache = TensorCache::new(&model);
    audit_lines_with(lines, p, &|id| cache.get(id))
}

/// Recompute the brute-force value of an errata row by the operator route.
/// Returns `true` when the second path agrees with the first and both
/// disagree with the closed form.
pub fn confirm(row: &ErrataRow) -> Result<bool, Error> {
    let model = choi_lu_shape_ops(&row.params)?;
    let route = OperatorRoute::new(&model)?;
    let idx: Vec<usize> = row.index.iter().map(|i| i - 1).collect();
    let code = row.label.split(['(', '_']).next().unwrap_or("");
    let second = match code {
        "R" => route.component(TensorId::R, &idx)?,
        "C" => route.component(TensorId::C, &idx)?,
        "gwR" => route.component(TensorId::GwRicc, &idx)?,
        "tau" | "rho" | "S" => return Ok(false),
        other => route.component(TensorId::parse(other)?, &idx)?,
    };
    Ok(second == row.brute && second != row.closed_form)
}

/// Errata merged across grid points: one entry per formula, dimension and
/// index tuple, keeping the first point and the number of failing points.
#[derive(Clone, Debug, Default)]
pub struct ErrataSummary {
    pub entries: BTreeMap<(String, usize, Vec<usize>), (ErrataRow, usize)>,
    pub raw_rows: usize,
}

impl ErrataSummary {
    pub fn add(&mut self, rows: Vec<ErrataRow>) {
        self.raw_rows += rows.len();
        for r in rows {
            let key = (r.label.clone(), r.params.n, r.index.clone());
            self.entries.entry(key).and_modify(|e| e.1 += 1).or_insert((r, 1));
        }
    }

    pub fn merge(&mut self, other: ErrataSummary) {
        self.raw_rows += other.raw_rows;
        for (k, (r, c)) in other.entries {
            self.entries.entry(k).and_modify(|e| e.1 += c).or_insert((r, c));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Formula labels with at least one mismatch.
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self.entries.keys().map(|k| k.0.clone()).collect();
        out.dedup();
        out
    }
}
