//! Service rate region bounds, allocations and membership.
//!
//! Every quantity is an exact [`Rational`]. Closed forms come first; the LP
//! based routines work on a [`RecoveryHypergraph`] and report whether their
//! answer is exact (all minimal recovery sets) or an inner approximation
//! (geometric edges only).

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::gaussian_binomial;
use crate::hypergraph::{build_hypergraph, induced_subgraph, EdgePolicy, RecoveryHypergraph};
use crate::lp::{
    dot, feasibility, int, matching_number, parse_rational, solve_max, Feasibility, LinearProgram,
    LpOutcome, Rational, Sense,
};
use crate::recovery::{second_smallest_recovery_sets, smallest_recovery_set};
use crate::rm::{object_order, RmParams};

fn pow2(e: u32) -> i64 {
    1i64 << e
}

fn order_of(p: RmParams, j: usize) -> Result<u32> {
    Ok(object_order(p, j)?.order)
}

fn check_order(p: RmParams, l: u32) -> Result<()> {
    if l > p.r {
        return Err(Error::OrderOutOfRange { order: l, r: p.r });
    }
    Ok(())
}

/// Largest servable rate of object `j` alone:
/// `1 + (2^m - 2^l) / (2^(r+1) - 2^l)` for order `l`.
pub fn lambda_max(p: RmParams, j: usize) -> Result<Rational> {
    p.require_dual()?;
    let l = order_of(p, j)?;
    same_order_sum_bound(p, l)
}

/// The same value read off the second-smallest family:
/// `1 + (number of sets) / (replication)`.
pub fn lambda_max_from_design(p: RmParams, j: usize) -> Result<Rational> {
    p.require_dual()?;
    let l = order_of(p, j)?;
    let blocks = gaussian_binomial(p.m - l, p.r + 1 - l);
    let replication = gaussian_binomial(p.m - l - 1, p.r - l);
    Ok(int(1) + Rational::new(blocks.into(), replication.into()))
}

/// Bound on the summed rates of all order-`l` objects. Equal to the single
/// object maximum, and attained.
pub fn same_order_sum_bound(p: RmParams, l: u32) -> Result<Rational> {
    p.require_dual()?;
    check_order(p, l)?;
    let den = pow2(p.r + 1) - pow2(l);
    Ok(int(1) + Rational::new((pow2(p.m) - pow2(l)).into(), den.into()))
}

/// Bound on the summed rates of all objects of order at most `l`.
pub fn total_sum_bound(p: RmParams, l: u32) -> Result<Rational> {
    p.require_dual()?;
    check_order(p, l)?;
    let den = pow2(p.r + 1) - pow2(l);
    Ok(int(1) + Rational::new((pow2(p.m) - 1).into(), den.into()))
}

/// The sum bound `1 + 2^(m-r)` that defines the enclosing simplex.
pub fn omega_sum_bound(p: RmParams) -> Rational {
    int(1 + pow2(p.m - p.r))
}

/// A nonnegative rate for each of the `k` objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandVector {
    rates: Vec<Rational>,
}

impl DemandVector {
    pub fn new(p: RmParams, rates: Vec<Rational>) -> Result<Self> {
        if rates.len() != p.k() {
            return Err(Error::DimensionMismatch {
                expected: p.k(),
                found: rates.len(),
            });
        }
        if let Some(bad) = rates.iter().find(|r| r.is_negative()) {
            return Err(Error::Parse(format!("negative rate {bad}")));
        }
        Ok(DemandVector { rates })
    }

    pub fn zeros(p: RmParams) -> Self {
        DemandVector {
            rates: vec![Rational::zero(); p.k()],
        }
    }

    /// `value * e_j`.
    pub fn axis(p: RmParams, j: usize, value: Rational) -> Result<Self> {
        object_order(p, j)?;
        let mut d = DemandVector::zeros(p);
        d.rates[j - 1] = value;
        DemandVector::new(p, d.rates)
    }

    /// Parses rates separated by commas or whitespace. Brackets and quotes
    /// are ignored, so a JSON array of strings or numbers also works.
    pub fn parse(p: RmParams, text: &str) -> Result<Self> {
        let cleaned: String = text
            .chars()
            .map(|c| {
                if matches!(c, '[' | ']' | '"' | '\'' | ',') {
                    ' '
                } else {
                    c
                }
            })
            .collect();
        let rates = cleaned
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        DemandVector::new(p, rates)
    }

    pub fn rates(&self) -> &[Rational] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.rates.iter().fold(Rational::zero(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationEntry {
    pub object: usize,
    pub servers: Vec<usize>,
    pub auxiliary: bool,
    pub rate: Rational,
}

/// Rates assigned to recovery sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub n: usize,
    pub entries: Vec<AllocationEntry>,
}

impl Allocation {
    /// Rate served per object, index `j - 1`.
    pub fn totals(&self, k: usize) -> Vec<Rational> {
        let mut t = vec![Rational::zero(); k];
        for e in &self.entries {
            t[e.object - 1] += &e.rate;
        }
        t
    }

    /// Load per server, index `v - 1`.
    pub fn loads(&self) -> Vec<Rational> {
        let mut load = vec![Rational::zero(); self.n];
        for e in &self.entries {
            for &v in &e.servers {
                load[v - 1] += &e.rate;
            }
        }
        load
    }

    /// Checks nonnegative rates, per-object totals equal to `demand`, and
    /// every server load at most 1.
    pub fn check(&self, demand: &DemandVector) -> Result<()> {
        if let Some(e) = self.entries.iter().find(|e| e.rate.is_negative()) {
            return Err(Error::Verification(format!(
                "negative rate on {:?}",
                e.servers
            )));
        }
        if self.totals(demand.len()) != demand.rates() {
            return Err(Error::Verification(
                "allocation totals differ from demand".into(),
            ));
        }
        if let Some((v, l)) = self.loads().iter().enumerate().find(|(_, l)| **l > int(1)) {
            return Err(Error::Verification(format!(
                "server {} carries load {l}",
                v + 1
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Vec<AllocationJson> {
        self.entries
            .iter()
            .map(|e| AllocationJson {
                object: e.object,
                servers: e.servers.clone(),
                auxiliary: e.auxiliary,
                rate: e.rate.to_string(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AllocationJson {
    pub object: usize,
    pub servers: Vec<usize>,
    pub auxiliary: bool,
    pub rate: String,
}

/// Weight 1 on the smallest set and `1 / replication` on every
/// second-smallest set. Fails if any load exceeds 1 or the total misses
/// [`lambda_max`].
pub fn achievability_allocation(p: RmParams, j: usize) -> Result<Allocation> {
    let smallest = smallest_recovery_set(p, j)?;
    let l = smallest.object.order;
    let share = Rational::new(1.into(), gaussian_binomial(p.m - l - 1, p.r - l).into());
    let mut entries = vec![AllocationEntry {
        object: j,
        auxiliary: smallest.columns.len() == 1,
        servers: smallest.columns,
        rate: int(1),
    }];
    for s in second_smallest_recovery_sets(p, j)? {
        entries.push(AllocationEntry {
            object: j,
            auxiliary: s.columns.len() == 1,
            servers: s.columns,
            rate: share.clone(),
        });
    }
    let alloc = Allocation { n: p.n(), entries };
    alloc.check(&DemandVector::axis(p, j, lambda_max(p, j)?)?)?;
    Ok(alloc)
}

/// Proof that a demand lies outside the region of a hypergraph.
///
/// `server_weights` and `object_weights` satisfy: every edge of object `i`
/// carries server weight at least `z_i`, each `z_i <= 1`, and
/// `sum(lambda_i z_i) > sum(y_v)`. Any allocation would then load some
/// server past 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub servers: Vec<usize>,
    pub server_weights: Vec<Rational>,
    pub object_weights: Vec<Rational>,
    /// `sum(lambda_i z_i) - sum(y_v)`, strictly positive.
    pub margin: Rational,
}

impl CoverCertificate {
    pub fn verify(&self, g: &RecoveryHypergraph, demand: &DemandVector) -> bool {
        let y = &self.server_weights;
        let z = &self.object_weights;
        if y.len() != g.servers().len() || z.len() != demand.len() {
            return false;
        }
        let sign_ok = y.iter().chain(z).all(|w| !w.is_negative()) && z.iter().all(|w| *w <= int(1));
        let covers = g.edges().iter().all(|e| {
            let load = g
                .servers()
                .iter()
                .zip(y)
                .filter(|(v, _)| e.contains_server(**v))
                .fold(Rational::zero(), |a, (_, w)| a + w);
            load >= z[e.label - 1]
        });
        let total_y = y.iter().fold(Rational::zero(), |a, b| a + b);
        let margin = dot(demand.rates(), z) - total_y;
        sign_ok && covers && margin == self.margin && margin.is_positive()
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            server_weights: self
                .servers
                .iter()
                .zip(&self.server_weights)
                .filter(|(_, w)| !w.is_zero())
                .map(|(v, w)| (*v, w.to_string()))
                .collect(),
            object_weights: self.object_weights.iter().map(|w| w.to_string()).collect(),
            margin: self.margin.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateJson {
    pub server_weights: Vec<(usize, String)>,
    pub object_weights: Vec<String>,
    pub margin: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Achievable; the allocation is a witness.
    Inside { allocation: Allocation, exact: bool },
    /// Not achievable with the hypergraph's edges. With `exact == false`
    /// other recovery sets might still serve the demand.
    Outside {
        certificate: CoverCertificate,
        exact: bool,
    },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

fn demand_lp(g: &RecoveryHypergraph, demand: &DemandVector) -> Result<LinearProgram> {
    let edges = g.edges();
    let mut lp = LinearProgram::new(vec![Rational::zero(); edges.len()]);
    for (i, rate) in demand.rates().iter().enumerate() {
        let row = edges
            .iter()
            .map(|e| int(i64::from(e.label == i + 1)))
            .collect();
        lp.add_row(row, Sense::Eq, rate.clone())?;
    }
    for &v in g.servers() {
        let row = edges
            .iter()
            .map(|e| int(i64::from(e.contains_server(v))))
            .collect();
        lp.add_row(row, Sense::Le, int(1))?;
    }
    Ok(lp)
}

fn certificate(g: &RecoveryHypergraph, demand: &DemandVector) -> Result<Option<CoverCertificate>> {
    let servers = g.servers();
    let s = servers.len();
    let k = demand.len();
    let mut objective = vec![int(-1); s];
    objective.extend(demand.rates().iter().cloned());
    let mut lp = LinearProgram::new(objective);
    for e in g.edges() {
        let mut row: Vec<Rational> = servers
            .iter()
            .map(|&v| int(i64::from(e.contains_server(v))))
            .collect();
        row.extend((1..=k).map(|i| {
            if i == e.label {
                int(-1)
            } else {
                Rational::zero()
            }
        }));
        lp.add_row(row, Sense::Ge, Rational::zero())?;
    }
    for i in 0..k {
        let mut row = vec![Rational::zero(); s + k];
        row[s + i] = int(1);
        lp.add_row(row, Sense::Le, int(1))?;
    }
    match solve_max(&lp)? {
        LpOutcome::Optimal { value, x } if value.is_positive() => Ok(Some(CoverCertificate {
            servers: servers.to_vec(),
            server_weights: x[..s].to_vec(),
            object_weights: x[s..].to_vec(),
            margin: value,
        })),
        LpOutcome::Optimal { .. } => Ok(None),
        other => Err(Error::Verification(format!(
            "certificate LP ended as {other:?}"
        ))),
    }
}

/// Decides whether `demand` can be served using the edges of `g`.
pub fn membership_in(g: &RecoveryHypergraph, demand: &DemandVector) -> Result<Membership> {
    if demand.len() != g.params.k() {
        return Err(Error::DimensionMismatch {
            expected: g.params.k(),
            found: demand.len(),
        });
    }
    let exact = g.policy.is_exact();
    let lp = demand_lp(g, demand)?;
    match feasibility(&lp)? {
        Feasibility::Feasible(x) => {
            let entries = g
                .edges()
                .iter()
                .zip(x)
                .filter(|(_, w)| !w.is_zero())
                .map(|(e, rate)| AllocationEntry {
                    object: e.label,
                    servers: e.servers.clone(),
                    auxiliary: e.auxiliary,
                    rate,
                })
                .collect();
            let allocation = Allocation {
                n: g.params.n(),
                entries,
            };
            allocation.check(demand)?;
            Ok(Membership::Inside { allocation, exact })
        }
        Feasibility::Infeasible => match certificate(g, demand)? {
            Some(c) if c.verify(g, demand) => Ok(Membership::Outside {
                certificate: c,
                exact,
            }),
            _ => Err(Error::Verification(
                "demand LP infeasible but no separating certificate was found".into(),
            )),
        },
    }
}

/// Builds the hypergraph for `policy` and decides membership of `demand`.
pub fn membership(p: RmParams, demand: &DemandVector, policy: EdgePolicy) -> Result<Membership> {
    membership_in(&build_hypergraph(p, policy)?, demand)
}

/// `max sum(weight_i * lambda_i)` over the demands servable by `g`.
pub fn max_weighted_demand(g: &RecoveryHypergraph, weights: &[Rational]) -> Result<Rational> {
    if weights.len() != g.params.k() {
        return Err(Error::DimensionMismatch {
            expected: g.params.k(),
            found: weights.len(),
        });
    }
    let mut lp = LinearProgram::new(
        g.edges()
            .iter()
            .map(|e| weights[e.label - 1].clone())
            .collect(),
    );
    for &v in g.servers() {
        let row = g
            .edges()
            .iter()
            .map(|e| int(i64::from(e.contains_server(v))))
            .collect();
        lp.add_row(row, Sense::Le, int(1))?;
    }
    match solve_max(&lp)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => Err(Error::Verification(format!(
            "weighted demand LP ended as {other:?}"
        ))),
    }
}

/// Largest servable `sum(lambda_j)` over the order-`l` objects.
pub fn order_sum_optimum(g: &RecoveryHypergraph, l: u32) -> Result<Rational> {
    let objects: Vec<usize> = g.params.order_range(l)?.collect();
    Ok(matching_number(&induced_subgraph(g, &objects))?.value)
}

/// True when the region of `g` equals the maximal achievable simplex, i.e.
/// `sum(lambda_j / lambda_j^max) <= 1` holds on the whole region.
pub fn region_is_achievable_simplex(g: &RecoveryHypergraph) -> Result<bool> {
    let p = g.params;
    let weights = (1..=p.k())
        .map(|j| lambda_max(p, j).map(|m| m.recip()))
        .collect::<Result<Vec<_>>>()?;
    Ok(max_weighted_demand(g, &weights)? == Rational::one())
}

/// The maximal achievable simplex and the enclosing simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplices {
    /// Vertices of the achievable simplex: the origin, then
    /// `lambda_j^max e_j` for each `j`.
    pub achievable: Vec<DemandVector>,
    /// `1 + 2^(m-r)`.
    pub omega_sum_bound: Rational,
    /// `1 + (2^m - 1) / 2^r`, the sharper sum bound.
    pub sum_bound: Rational,
    /// `(1 + 2^(m-r)) / (1 + 2^(m-r-1))`, always below 2.
    pub ratio: Rational,
}

pub fn simplices(p: RmParams) -> Result<Simplices> {
    p.require_dual()?;
    let mut achievable = vec![DemandVector::zeros(p)];
    for j in 1..=p.k() {
        achievable.push(DemandVector::axis(p, j, lambda_max(p, j)?)?);
    }
    let ratio = omega_sum_bound(p) / int(1 + pow2(p.m - p.r - 1));
    if ratio >= int(2) {
        return Err(Error::Verification(format!(
            "simplex ratio {ratio} is not below 2"
        )));
    }
    Ok(Simplices {
        achievable,
        omega_sum_bound: omega_sum_bound(p),
        sum_bound: total_sum_bound(p, p.r)?,
        ratio,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObjectBoundJson {
    pub j: usize,
    pub order: u32,
    pub lambda_max: String,
    pub num_second_smallest: u64,
    pub replication: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrderBoundJson {
    pub order: u32,
    pub objects: Vec<usize>,
    pub same_order_bound: String,
    pub total_bound: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OmegaJson {
    pub sum_bound: String,
    pub sharper_sum_bound: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplicesJson {
    #[serde(rename = "A")]
    pub achievable: Vec<Vec<String>>,
    #[serde(rename = "Omega")]
    pub omega: OmegaJson,
    pub ratio: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SrrReport {
    pub params: RmParams,
    pub per_object: Vec<ObjectBoundJson>,
    pub per_order_bound: Vec<OrderBoundJson>,
    pub total_bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_star: Option<String>,
    pub simplices: SimplicesJson,
    pub policy: EdgePolicy,
    pub exact: bool,
}

/// Closed-form bounds for every object and order. Under the oracle policy
/// the matching number of the full hypergraph is added.
pub fn srr_report(p: RmParams, policy: EdgePolicy) -> Result<SrrReport> {
    p.require_dual()?;
    let mut per_object = Vec::with_capacity(p.k());
    for j in 1..=p.k() {
        let l = order_of(p, j)?;
        per_object.push(ObjectBoundJson {
            j,
            order: l,
            lambda_max: lambda_max(p, j)?.to_string(),
            num_second_smallest: gaussian_binomial(p.m - l, p.r + 1 - l),
            replication: gaussian_binomial(p.m - l - 1, p.r - l),
        });
    }
    let per_order_bound = (0..=p.r)
        .map(|l| {
            Ok(OrderBoundJson {
                order: l,
                objects: p.order_range(l)?.collect(),
                same_order_bound: same_order_sum_bound(p, l)?.to_string(),
                total_bound: total_sum_bound(p, l)?.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let nu_star = match policy {
        EdgePolicy::Oracle => Some(
            matching_number(&build_hypergraph(p, policy)?)?
                .value
                .to_string(),
        ),
        EdgePolicy::Geometric => None,
    };
    let s = simplices(p)?;
    Ok(SrrReport {
        params: p,
        per_object,
        per_order_bound,
        total_bound: total_sum_bound(p, p.r)?.to_string(),
        nu_star,
        simplices: SimplicesJson {
            achievable: s
                .achievable
                .iter()
                .map(|d| d.rates().iter().map(|r| r.to_string()).collect())
                .collect(),
            omega: OmegaJson {
                sum_bound: s.omega_sum_bound.to_string(),
                sharper_sum_bound: s.sum_bound.to_string(),
            },
            ratio: s.ratio.to_string(),
        },
        policy,
        exact: policy.is_exact(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::ratio;

    fn rm(r: u32, m: u32) -> RmParams {
        RmParams::new(r, m).unwrap()
    }

    #[test]
    fn closed_forms() {
        let p = rm(2, 4);
        assert_eq!(lambda_max(p, 1).unwrap(), ratio(22, 7));
        assert_eq!(lambda_max(p, 5).unwrap(), ratio(10, 3));
        assert_eq!(lambda_max(p, 11).unwrap(), int(4));
        for j in 1..=3 {
            assert_eq!(lambda_max(rm(1, 2), j).unwrap(), int(2));
        }
        assert_eq!(lambda_max(rm(0, 3), 1).unwrap(), int(8));
        for j in 1..=p.k() {
            assert_eq!(
                lambda_max(p, j).unwrap(),
                lambda_max_from_design(p, j).unwrap()
            );
        }
        assert_eq!(same_order_sum_bound(p, 1).unwrap(), ratio(10, 3));
        assert_eq!(total_sum_bound(p, 2).unwrap(), int(1) + ratio(15, 4));
        assert_eq!(total_sum_bound(rm(1, 2), 1).unwrap(), ratio(5, 2));
        assert!(same_order_sum_bound(p, 3).is_err());
        assert!(lambda_max(rm(2, 2), 1).is_err());
    }

    #[test]
    fn allocations() {
        let a = achievability_allocation(rm(2, 4), 5).unwrap();
        assert_eq!(a.entries.len(), 8);
        assert_eq!(a.entries[0].servers, vec![1, 2]);
        assert!(a.entries[1..].iter().all(|e| e.rate == ratio(1, 3)));
        assert!(a.loads()[2..].iter().all(|l| *l == int(1)));
        let a = achievability_allocation(rm(2, 4), 11).unwrap();
        assert!(a.loads().iter().all(|l| *l == int(1)));
        let a = achievability_allocation(rm(1, 2), 1).unwrap();
        assert_eq!(a.totals(3), vec![int(2), int(0), int(0)]);
        assert!(a.entries[0].auxiliary);
    }

    #[test]
    fn small_membership() {
        let p = rm(1, 2);
        let g = build_hypergraph(p, EdgePolicy::Oracle).unwrap();
        let d = |s: &str| DemandVector::parse(p, s).unwrap();
        assert!(membership_in(&g, &d("2 0 0")).unwrap().is_inside());
        assert!(membership_in(&g, &d("1, 0.5, 0.5")).unwrap().is_inside());
        assert!(membership_in(&g, &d("1 1 0")).unwrap().is_inside());
        match membership_in(&g, &DemandVector::zeros(p)).unwrap() {
            Membership::Inside { allocation, exact } => {
                assert!(allocation.entries.is_empty());
                assert!(exact);
            }
            other => panic!("{other:?}"),
        }
        for outside in ["1 1 1", "2.5 0 0"] {
            match membership_in(&g, &d(outside)).unwrap() {
                Membership::Outside { certificate, .. } => {
                    assert!(certificate.verify(&g, &d(outside)))
                }
                other => panic!("{other:?}"),
            }
        }
        assert!(DemandVector::parse(p, "1 2").is_err());
        assert!(DemandVector::parse(p, "1 -2 0").is_err());
    }

    #[test]
    fn small_code_region_is_the_simplex() {
        let g = build_hypergraph(rm(1, 2), EdgePolicy::Oracle).unwrap();
        assert!(region_is_achievable_simplex(&g).unwrap());
        let s = simplices(rm(2, 4)).unwrap();
        assert_eq!(s.omega_sum_bound, int(5));
        assert_eq!(s.ratio, ratio(5, 3));
        assert_eq!(simplices(rm(1, 2)).unwrap().omega_sum_bound, int(3));
    }

    #[test]
    fn report_shape() {
        let r = srr_report(rm(1, 2), EdgePolicy::Oracle).unwrap();
        assert_eq!(r.nu_star.as_deref(), Some("2"));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["perObject"][0]["lambdaMax"], "2");
        assert_eq!(v["simplices"]["Omega"]["sumBound"], "3");
        assert_eq!(v["simplices"]["A"][1], serde_json::json!(["2", "0", "0"]));
    }
}
