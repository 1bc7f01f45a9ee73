//! Exact linear programming over the rationals.
//!
//! A revised two-phase simplex with Bland's rule, plus a dual simplex for
//! covering programs. All arithmetic is
//! `BigRational`, so optima such as `22/7` come out exactly and every run on
//! the same input visits the same bases.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::RecoveryHypergraph;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q`, an integer, or a decimal such as `-0.125` without rounding.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole
            .chars()
            .chain(frac.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(digits, scale);
    Ok(if neg { -value } else { value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// `max c.x` subject to `A x (sense) b`, `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        LinearProgram {
            objective,
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, row: Vec<Rational>, sense: Sense, rhs: Rational) -> Result<()> {
        if row.len() != self.vars() {
            return Err(Error::DimensionMismatch {
                expected: self.vars(),
                found: row.len(),
            });
        }
        self.rows.push(row);
        self.senses.push(sense);
        self.rhs.push(rhs);
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let n = self.vars();
        if let Some(row) = self.rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        if self.senses.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows.len(),
                found: self.senses.len().min(self.rhs.len()),
            });
        }
        Ok(())
    }

    /// True when `x` is nonnegative and meets every row exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.vars()
            && x.iter().all(|v| !v.is_negative())
            && self
                .rows
                .iter()
                .zip(&self.senses)
                .zip(&self.rhs)
                .all(|((row, s), b)| {
                    let lhs = dot(row, x);
                    match s {
                        Sense::Le => lhs <= *b,
                        Sense::Ge => lhs >= *b,
                        Sense::Eq => lhs == *b,
                    }
                })
    }

    /// Plain-text dump: one objective line, then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = String::from("max");
        for c in &self.objective {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
        for ((row, s), b) in self.rows.iter().zip(&self.senses).zip(&self.rhs) {
            for a in row {
                write!(out, "{a} ").unwrap();
            }
            writeln!(out, "{} {b}", s.symbol()).unwrap();
        }
        out
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

type Column = Vec<(usize, Rational)>;

/// Revised simplex state: the basis inverse is kept explicitly and columns
/// are stored sparse, which suits the short, wide programs built here.
struct Revised {
    columns: Vec<Column>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    basis: Vec<usize>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Revised {
    fn rows(&self) -> usize {
        self.basis.len()
    }

    /// `B^-1 A_j`.
    fn ftran(&self, j: usize) -> Vec<Rational> {
        let mut u = vec![Rational::zero(); self.rows()];
        for (i, a) in &self.columns[j] {
            for (r, ur) in u.iter_mut().enumerate() {
                let b = &self.binv[r][*i];
                if !b.is_zero() {
                    *ur += b * a;
                }
            }
        }
        u
    }

    fn pivot(&mut self, r: usize, c: usize, u: &[Rational]) {
        let p = u[r].clone();
        if !p.is_one() {
            for v in self.binv[r].iter_mut() {
                *v /= &p;
            }
            self.xb[r] /= &p;
        }
        let prow = self.binv[r].clone();
        let px = self.xb[r].clone();
        for (i, f) in u.iter().enumerate() {
            if i == r || f.is_zero() {
                continue;
            }
            for (v, pv) in self.binv[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= f * pv;
                }
            }
            self.xb[i] -= f * &px;
        }
        self.basis[r] = c;
    }

    /// Simplex multipliers `c_B B^-1`.
    fn prices(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut pi = vec![Rational::zero(); self.rows()];
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (i, p) in pi.iter_mut().enumerate() {
                let v = &self.binv[r][i];
                if !v.is_zero() {
                    *p += &cost[b] * v;
                }
            }
        }
        pi
    }

    /// Maximises `cost.x` using only columns `< allowed` as entering
    /// candidates.
    fn optimise(&mut self, cost: &[Rational], allowed: usize) -> Step {
        loop {
            let pi = self.prices(cost);
            // Bland: lowest-index improving column, then lowest-index basic
            // variable among tied ratios
            let entering = (0..allowed).find(|&j| {
                let d = self.columns[j]
                    .iter()
                    .fold(cost[j].clone(), |acc, (i, a)| acc - &pi[*i] * a);
                d.is_positive()
            });
            let Some(c) = entering else {
                return Step::Optimal;
            };
            let u = self.ftran(c);
            let mut best: Option<(usize, Rational)> = None;
            for (i, a) in u.iter().enumerate() {
                if !a.is_positive() {
                    continue;
                }
                let t = &self.xb[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, bt)) => t < *bt || (t == *bt && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, t));
                }
            }
            let Some((r, _)) = best else {
                return Step::Unbounded;
            };
            self.pivot(r, c, &u);
        }
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.xb[i].clone();
            }
        }
        x
    }
}

/// Runs phase one. Returns a feasible basis together with the number of
/// structural plus slack columns, or `None` when the program is infeasible.
/// Artificials left in the basis sit on redundant rows at level zero and
/// can never leave it again.
fn phase_one(lp: &LinearProgram) -> Result<Option<(Revised, usize)>> {
    lp.validate()?;
    let n = lp.vars();
    let m = lp.rows.len();
    let extra = lp.senses.iter().filter(|s| **s != Sense::Eq).count();
    let artificial_start = n + extra;

    let mut columns: Vec<Column> = vec![Vec::new(); artificial_start];
    let mut xb = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = n;
    let mut artificials = 0;
    for i in 0..m {
        // flip rows so the right-hand side is nonnegative, and zero-rhs `>=`
        // rows so their slack can start in the basis
        let flip = lp.rhs[i].is_negative() || lp.rhs[i].is_zero() && lp.senses[i] == Sense::Ge;
        let sign = if flip { int(-1) } else { int(1) };
        for (j, a) in lp.rows[i].iter().enumerate() {
            if !a.is_zero() {
                columns[j].push((i, a * &sign));
            }
        }
        let mut slack_basic = false;
        if lp.senses[i] != Sense::Eq {
            let coeff = if lp.senses[i] == Sense::Le {
                int(1)
            } else {
                int(-1)
            };
            let coeff = coeff * &sign;
            slack_basic = coeff.is_positive();
            columns[slack].push((i, coeff));
            if slack_basic {
                basis.push(slack);
            }
            slack += 1;
        }
        if !slack_basic {
            columns.push(vec![(i, int(1))]);
            basis.push(artificial_start + artificials);
            artificials += 1;
        }
        xb.push(&lp.rhs[i] * &sign);
    }
    let mut binv = vec![vec![Rational::zero(); m]; m];
    for (i, row) in binv.iter_mut().enumerate() {
        row[i] = int(1);
    }
    let mut t = Revised {
        columns,
        binv,
        xb,
        basis,
    };
    if artificials == 0 {
        return Ok(Some((t, artificial_start)));
    }
    let mut cost = vec![Rational::zero(); artificial_start + artificials];
    for c in cost.iter_mut().skip(artificial_start) {
        *c = int(-1);
    }
    t.optimise(&cost, artificial_start + artificials);
    let infeasibility = t
        .basis
        .iter()
        .zip(&t.xb)
        .filter(|(&b, _)| b >= artificial_start)
        .fold(Rational::zero(), |acc, (_, v)| acc + v);
    if infeasibility.is_positive() {
        return Ok(None);
    }
    for r in 0..t.rows() {
        if t.basis[r] < artificial_start {
            continue;
        }
        let replacement = (0..artificial_start).find(|&j| {
            let dot = t.columns[j]
                .iter()
                .fold(Rational::zero(), |acc, (i, a)| acc + &t.binv[r][*i] * a);
            !dot.is_zero()
        });
        if let Some(j) = replacement {
            let u = t.ftran(j);
            t.pivot(r, j, &u);
        }
    }
    Ok(Some((t, artificial_start)))
}

/// Exact optimum of `lp`.
pub fn solve_max(lp: &LinearProgram) -> Result<LpOutcome> {
    let Some((mut t, allowed)) = phase_one(lp)? else {
        return Ok(LpOutcome::Infeasible);
    };
    let mut cost = lp.objective.clone();
    cost.resize(t.columns.len(), Rational::zero());
    match t.optimise(&cost, allowed) {
        Step::Unbounded => Ok(LpOutcome::Unbounded),
        Step::Optimal => {
            let x = t.solution(lp.vars());
            let value = dot(&lp.objective, &x);
            Ok(LpOutcome::Optimal { value, x })
        }
    }
}

/// Phase-one verdict with an exact witness.
pub fn feasibility(lp: &LinearProgram) -> Result<Feasibility> {
    Ok(match phase_one(lp)? {
        Some((t, _)) => Feasibility::Feasible(t.solution(lp.vars())),
        None => Feasibility::Infeasible,
    })
}

/// Exact optimum of `min c.y` subject to `A y >= b`, `y >= 0`, for
/// nonnegative costs `c`.
///
/// Runs the dual simplex from the all-surplus basis, which is dual feasible
/// when `c >= 0`. Leaving and entering variables are picked by smallest
/// index among the candidates, the dual form of Bland's rule. This needs
/// far fewer pivots than phase one when there are many more rows than
/// variables. The returned value is the minimum.
pub fn solve_min_covering(
    objective: &[Rational],
    rows: &[Vec<Rational>],
    rhs: &[Rational],
) -> Result<LpOutcome> {
    let n = objective.len();
    let m = rows.len();
    if let Some(row) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: row.len(),
        });
    }
    if rhs.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: rhs.len(),
        });
    }
    if objective.iter().any(|c| c.is_negative()) {
        return Err(Error::Verification(
            "covering program needs nonnegative costs".into(),
        ));
    }
    // rows become -A y + s = -b with the surplus s basic
    let mut columns: Vec<Column> = vec![Vec::new(); n + m];
    for (i, row) in rows.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            if !a.is_zero() {
                columns[j].push((i, -a));
            }
        }
        columns[n + i].push((i, int(1)));
    }
    let mut binv = vec![vec![Rational::zero(); m]; m];
    for (i, row) in binv.iter_mut().enumerate() {
        row[i] = int(1);
    }
    let mut t = Revised {
        columns,
        binv,
        xb: rhs.iter().map(|b| -b).collect(),
        basis: (n..n + m).collect(),
    };
    let mut cost = objective.to_vec();
    cost.resize(n + m, Rational::zero());
    let mut basic = vec![false; n + m];
    for &b in &t.basis {
        basic[b] = true;
    }
    loop {
        let leaving = (0..m)
            .filter(|&r| t.xb[r].is_negative())
            .min_by_key(|&r| t.basis[r]);
        let Some(r) = leaving else {
            let x = t.solution(n);
            let value = dot(objective, &x);
            return Ok(LpOutcome::Optimal { value, x });
        };
        let pi = t.prices(&cost);
        let mut best: Option<(usize, Rational)> = None;
        for j in (0..n + m).filter(|&j| !basic[j]) {
            let alpha = t.columns[j]
                .iter()
                .fold(Rational::zero(), |acc, (i, a)| acc + &t.binv[r][*i] * a);
            if !alpha.is_negative() {
                continue;
            }
            let d = t.columns[j]
                .iter()
                .fold(cost[j].clone(), |acc, (i, a)| acc - &pi[*i] * a);
            let ratio = d / -alpha;
            if best.as_ref().is_none_or(|(_, b)| ratio < *b) {
                best = Some((j, ratio));
            }
        }
        let Some((c, _)) = best else {
            return Ok(LpOutcome::Infeasible);
        };
        let u = t.ftran(c);
        basic[t.basis[r]] = false;
        basic[c] = true;
        t.pivot(r, c, &u);
    }
}

/// Optimal value of an LP together with the optimal vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub weights: Vec<Rational>,
}

fn capacity_rows(g: &RecoveryHypergraph) -> Vec<Vec<Rational>> {
    g.servers()
        .iter()
        .map(|&v| {
            g.edges()
                .iter()
                .map(|e| int(i64::from(e.contains_server(v))))
                .collect()
        })
        .collect()
}

/// The fractional matching LP: one weight per edge, one unit-capacity row
/// per server. The auxiliary vertex has no row.
pub fn matching_lp(g: &RecoveryHypergraph) -> LinearProgram {
    let mut lp = LinearProgram::new(vec![int(1); g.edges().len()]);
    for row in capacity_rows(g) {
        lp.add_row(row, Sense::Le, int(1))
            .expect("row width is the edge count");
    }
    lp
}

fn expect_optimal(outcome: LpOutcome, what: &str) -> Result<LpSolution> {
    match outcome {
        LpOutcome::Optimal { value, x } => Ok(LpSolution { value, weights: x }),
        other => Err(Error::Verification(format!("{what} LP ended as {other:?}"))),
    }
}

/// `nu*`: maximum fractional matching, weights indexed like `g.edges()`.
pub fn matching_number(g: &RecoveryHypergraph) -> Result<LpSolution> {
    let lp = matching_lp(g);
    let sol = expect_optimal(solve_max(&lp)?, "matching")?;
    if !lp.is_feasible(&sol.weights) {
        return Err(Error::Verification(
            "matching violates a server capacity".into(),
        ));
    }
    Ok(sol)
}

/// `tau*`: minimum fractional vertex cover, weights indexed like
/// `g.servers()`. Solved as its own LP rather than read off the duals.
pub fn vertex_cover_number(g: &RecoveryHypergraph) -> Result<LpSolution> {
    let servers = g.servers();
    let mut lp = LinearProgram::new(vec![int(1); servers.len()]);
    for e in g.edges() {
        let row = servers
            .iter()
            .map(|&v| int(i64::from(e.contains_server(v))))
            .collect();
        lp.add_row(row, Sense::Ge, int(1))?;
    }
    let sol = expect_optimal(
        solve_min_covering(&lp.objective, &lp.rows, &lp.rhs)?,
        "vertex cover",
    )?;
    if !lp.is_feasible(&sol.weights) {
        return Err(Error::Verification("cover leaves an edge uncovered".into()));
    }
    Ok(sol)
}

/// Solves both LPs and checks `nu* = tau*`.
pub fn duality_check(g: &RecoveryHypergraph) -> Result<(LpSolution, LpSolution)> {
    let nu = matching_number(g)?;
    let tau = vertex_cover_number(g)?;
    if nu.value != tau.value {
        return Err(Error::Verification(format!(
            "matching number {} differs from cover number {}",
            nu.value, tau.value
        )));
    }
    Ok((nu, tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{build_hypergraph, induced_subgraph, EdgePolicy};
    use crate::rm::RmParams;

    fn rm(r: u32, m: u32) -> RmParams {
        RmParams::new(r, m).unwrap()
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("22/7").unwrap(), ratio(22, 7));
        assert_eq!(parse_rational("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational(".75").unwrap(), ratio(3, 4));
        for bad in ["", "1/0", "abc", "1.2.3", "-", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn trivial_programs() {
        let mut lp = LinearProgram::new(vec![int(1)]);
        lp.add_row(vec![int(1)], Sense::Le, int(1)).unwrap();
        assert_eq!(solve_max(&lp).unwrap().value(), Some(&int(1)));

        assert_eq!(
            solve_max(&LinearProgram::new(vec![])).unwrap().value(),
            Some(&int(0))
        );
        assert_eq!(
            solve_max(&LinearProgram::new(vec![int(1)])).unwrap(),
            LpOutcome::Unbounded
        );
        assert_eq!(
            solve_max(&LinearProgram::new(vec![int(-1)]))
                .unwrap()
                .value(),
            Some(&int(0))
        );

        let mut lp = LinearProgram::new(vec![int(1), int(1)]);
        lp.add_row(vec![int(1), int(1)], Sense::Le, int(1)).unwrap();
        lp.add_row(vec![int(1), int(0)], Sense::Ge, int(2)).unwrap();
        assert_eq!(solve_max(&lp).unwrap(), LpOutcome::Infeasible);
        assert_eq!(feasibility(&lp).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // max x + 2y s.t. x + y = 3, -x <= -1, y <= 1.5
        let mut lp = LinearProgram::new(vec![int(1), int(2)]);
        lp.add_row(vec![int(1), int(1)], Sense::Eq, int(3)).unwrap();
        lp.add_row(vec![int(-1), int(0)], Sense::Le, int(-1))
            .unwrap();
        lp.add_row(vec![int(0), int(1)], Sense::Le, ratio(3, 2))
            .unwrap();
        match solve_max(&lp).unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, ratio(9, 2));
                assert_eq!(x, vec![ratio(3, 2), ratio(3, 2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(vec![int(1), int(0)]);
        lp.add_row(vec![int(1), int(1)], Sense::Eq, int(2)).unwrap();
        lp.add_row(vec![int(2), int(2)], Sense::Eq, int(4)).unwrap();
        assert_eq!(solve_max(&lp).unwrap().value(), Some(&int(2)));
    }

    #[test]
    fn covering_programs() {
        // min y1 + y2 s.t. y1 + y2 >= 1, y1 >= 1/2, 2 y2 >= 1
        let rows = vec![
            vec![int(1), int(1)],
            vec![int(1), int(0)],
            vec![int(0), int(2)],
        ];
        let rhs = vec![int(1), ratio(1, 2), int(1)];
        match solve_min_covering(&[int(1), int(1)], &rows, &rhs).unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, int(1));
                assert_eq!(x, vec![ratio(1, 2), ratio(1, 2)]);
            }
            other => panic!("{other:?}"),
        }
        let rows = vec![vec![int(0)]];
        assert_eq!(
            solve_min_covering(&[int(1)], &rows, &[int(1)]).unwrap(),
            LpOutcome::Infeasible
        );
        assert!(solve_min_covering(&[int(-1)], &[], &[]).is_err());
    }

    #[test]
    fn small_matchings() {
        let g = build_hypergraph(rm(1, 2), EdgePolicy::Oracle).unwrap();
        let h = induced_subgraph(&g, &[3]);
        let (nu, tau) = duality_check(&h).unwrap();
        assert_eq!(nu.value, int(2));
        assert_eq!(tau.value, int(2));
        assert_eq!(duality_check(&g).unwrap().0.value, int(2));
        let e1 = induced_subgraph(&g, &[1]);
        assert_eq!(duality_check(&e1).unwrap().0.value, int(2));
        let empty = induced_subgraph(&g, &[]);
        assert_eq!(matching_number(&empty).unwrap().value, int(0));
        assert_eq!(vertex_cover_number(&empty).unwrap().value, int(0));
    }

    #[test]
    fn lp_text_export() {
        let mut lp = LinearProgram::new(vec![int(1), ratio(1, 2)]);
        lp.add_row(vec![int(1), int(1)], Sense::Ge, int(2)).unwrap();
        assert_eq!(lp.to_text(), "max 1 1/2\n1 1 >= 2\n");
    }
}
