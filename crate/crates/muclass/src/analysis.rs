//! Triviality tests, decomposition into basic invariants, independence
//! certificates, and vanishing-locus scans.
//!
//! The invariant ring of each classical Weyl group is free on explicit
//! generators (power sums for A, even power sums for B/C, even power sums
//! plus the coordinate product for D), so decomposing a class and reading
//! off its generator component is an exact linear solve. Independence is
//! certified by the Jacobian criterion: full rank of the Jacobian at one
//! rational witness point proves algebraic independence over ℚ.

use num::{BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::muclasses::{make_orbit, mu_class, MuError};
use crate::polyring::{canonical_form, RatPoly};
use crate::rootdata::{Family, RootDataError, RootDatum};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal: {0}")]
    Internal(String),
    #[error(transparent)]
    Datum(#[from] RootDataError),
    #[error(transparent)]
    Mu(#[from] MuError),
}

/// Exact zero test for an invariant polynomial; family A polynomials are
/// reduced modulo the traceless ideal first.
pub fn is_zero(p: &RatPoly, datum: &RootDatum) -> bool {
    canonical_form(datum, p).is_zero()
}

/// One basic invariant of the Chevalley generating set.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicInvariant {
    /// Short name used in reports: p2..pd for A, q2/q4/... for B/C/D, pf.
    pub name: String,
    pub degree: usize,
    pub poly: RatPoly,
}

fn power_sum(dim: usize, degree: u32) -> RatPoly {
    RatPoly::from_terms(
        dim,
        (0..dim).map(|i| {
            let mut e = vec![0u32; dim];
            e[i] = degree;
            (e, BigRational::one())
        }),
    )
}

fn coordinate_product(dim: usize) -> RatPoly {
    RatPoly::from_terms(dim, [(vec![1u32; dim], BigRational::one())])
}

/// Free generators of the Weyl-invariant ring, sorted by degree
/// (the Pfaffian comes after power sums of equal degree).
pub fn basic_invariants(datum: &RootDatum) -> Vec<BasicInvariant> {
    let d = datum.ambient_dim;
    let mut gens: Vec<BasicInvariant> = match datum.family {
        Family::A => (2..=d)
            .map(|k| BasicInvariant {
                name: format!("p{k}"),
                degree: k,
                poly: power_sum(d, k as u32),
            })
            .collect(),
        Family::B | Family::C => (1..=d)
            .map(|j| BasicInvariant {
                name: format!("q{}", 2 * j),
                degree: 2 * j,
                poly: power_sum(d, 2 * j as u32),
            })
            .collect(),
        Family::D => {
            let mut v: Vec<BasicInvariant> = (1..d)
                .map(|j| BasicInvariant {
                    name: format!("q{}", 2 * j),
                    degree: 2 * j,
                    poly: power_sum(d, 2 * j as u32),
                })
                .collect();
            v.push(BasicInvariant {
                name: "pf".into(),
                degree: d,
                poly: coordinate_product(d),
            });
            v
        }
    };
    gens.sort_by(|a, b| a.degree.cmp(&b.degree).then(a.name.cmp(&b.name)));
    gens
}

/// A product of basic invariants entering a decomposition, with its exact
/// coefficient. `generators` holds indices into `basic_invariants(datum)`
/// in nondecreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm {
    pub generators: Vec<usize>,
    pub coeff: BigRational,
}

/// Exact decomposition of an invariant of degree k over all products of
/// basic invariants of total degree k.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub degree: usize,
    pub terms: Vec<DecompositionTerm>,
    /// Coefficients on the single generators of degree exactly k,
    /// one entry per such generator (zero coefficients included).
    pub generator_component: Vec<(usize, BigRational)>,
}

impl Decomposition {
    /// Reassemble the polynomial (in the reduced chart for family A).
    pub fn reconstruct(&self, datum: &RootDatum) -> RatPoly {
        let gens = basic_invariants(datum);
        let dim = reduced_dim(datum);
        let mut acc = RatPoly::zero(dim);
        for term in &self.terms {
            let mut prod = RatPoly::constant(dim, term.coeff.clone());
            for &gi in &term.generators {
                prod = prod
                    .try_mul(&canonical_form(datum, &gens[gi].poly))
                    .expect("same dim");
            }
            acc = acc.try_add(&prod).expect("same dim");
        }
        acc
    }
}

fn reduced_dim(datum: &RootDatum) -> usize {
    match datum.family {
        Family::A => datum.ambient_dim - 1,
        _ => datum.ambient_dim,
    }
}

/// All multisets of generator indices with total degree k, in lexicographic
/// order of their nondecreasing index vectors.
pub fn generator_multisets(degrees: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(
        degrees: &[usize],
        start: usize,
        remaining: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if remaining == 0 {
            out.push(stack.clone());
            return;
        }
        for i in start..degrees.len() {
            if degrees[i] <= remaining {
                stack.push(i);
                rec(degrees, i, remaining - degrees[i], stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    rec(degrees, 0, k, &mut stack, &mut out);
    out
}

/// Exact Gaussian elimination; returns the rank.
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !rows[r][col].is_zero());
        let Some(pivot) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        for c in col..ncols {
            let v = rows[rank][c].clone() * &inv;
            rows[rank][c] = v;
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..ncols {
                    let delta = &rows[rank][c] * &f;
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Solve A c = b exactly where A must have full column rank; errors if the
/// system is inconsistent or underdetermined.
fn solve_exact(
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Result<Vec<BigRational>, AnalysisError> {
    let nrows = a.len();
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = BigRational::one() / m[rank][col].clone();
        for c in col..=ncols {
            let v = m[rank][c].clone() * &inv;
            m[rank][c] = v;
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=ncols {
                    let delta = &m[rank][c] * &f;
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    if rank < ncols {
        return Err(AnalysisError::Internal(
            "decomposition system is underdetermined; products of basic invariants \
             should be linearly independent"
                .into(),
        ));
    }
    for r in rank..nrows {
        if !m[r][ncols].is_zero() {
            return Err(AnalysisError::Internal(
                "decomposition system is inconsistent; the input is not in the \
                 invariant ring"
                    .into(),
            ));
        }
    }
    Ok((0..ncols).map(|c| m[c][ncols].clone()).collect())
}

/// Write a W-invariant homogeneous polynomial of degree k as an exact linear
/// combination of products of basic invariants.
pub fn decompose_in_generators(
    p: &RatPoly,
    datum: &RootDatum,
    k: usize,
) -> Result<Decomposition, AnalysisError> {
    let gens = basic_invariants(datum);
    let degrees: Vec<usize> = gens.iter().map(|g| g.degree).collect();
    let multisets = generator_multisets(&degrees, k);
    let dim = reduced_dim(datum);
    let target = canonical_form(datum, p);
    if let Some(deg) = target.homogeneous_degree() {
        if deg != k as u32 {
            return Err(AnalysisError::Argument(format!(
                "polynomial has degree {deg}, expected {k}"
            )));
        }
    }

    let products: Vec<RatPoly> = multisets
        .iter()
        .map(|ms| {
            ms.iter().fold(RatPoly::one(dim), |acc, &gi| {
                acc.try_mul(&canonical_form(datum, &gens[gi].poly))
                    .expect("same dim")
            })
        })
        .collect();

    // assemble the monomial-basis linear system
    let mut monomials: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    for prod in &products {
        for (m, _) in prod.terms() {
            monomials.insert(m.0.clone());
        }
    }
    for (m, _) in target.terms() {
        monomials.insert(m.0.clone());
    }
    let monomials: Vec<Vec<u32>> = monomials.into_iter().collect();
    let rows: Vec<Vec<BigRational>> = monomials
        .iter()
        .map(|m| products.iter().map(|p| p.coefficient(m)).collect())
        .collect();
    let rhs: Vec<BigRational> = monomials.iter().map(|m| target.coefficient(m)).collect();

    let coeffs = if multisets.is_empty() {
        if !target.is_zero() {
            return Err(AnalysisError::Internal(format!(
                "no invariant products exist in degree {k} but the input is nonzero"
            )));
        }
        Vec::new()
    } else {
        solve_exact(&rows, &rhs)?
    };

    let terms: Vec<DecompositionTerm> = multisets
        .iter()
        .zip(&coeffs)
        .map(|(ms, c)| DecompositionTerm {
            generators: ms.clone(),
            coeff: c.clone(),
        })
        .collect();
    let generator_component: Vec<(usize, BigRational)> = multisets
        .iter()
        .zip(&coeffs)
        .filter(|(ms, _)| ms.len() == 1 && gens[ms[0]].degree == k)
        .map(|(ms, c)| (ms[0], c.clone()))
        .collect();

    let decomposition = Decomposition {
        degree: k,
        terms,
        generator_component,
    };
    // reconstruction identity
    let rebuilt = decomposition.reconstruct(datum);
    if rebuilt != target {
        return Err(AnalysisError::Internal(
            "decomposition failed to reconstruct its input".into(),
        ));
    }
    Ok(decomposition)
}

/// Verdict of the Jacobian-criterion independence search.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub k_list: Vec<usize>,
    /// Witness in ambient coordinates when independence was certified.
    pub witness_point: Option<Vec<BigRational>>,
    pub jacobian_rank: usize,
    pub independent: bool,
    pub trials_used: usize,
    /// Indices (into k_list) of members that are exactly the zero
    /// polynomial; their presence proves dependence.
    pub zero_members: Vec<usize>,
}

fn random_witness_reduced<R: Rng>(dim: usize, rng: &mut R) -> Vec<BigRational> {
    (0..dim)
        .map(|_| BigRational::from_integer(rng.random_range(-1_000_000i64..=1_000_000).into()))
        .collect()
}

/// Lift a reduced witness to ambient coordinates (family A appends the
/// balancing coordinate).
fn lift_witness(datum: &RootDatum, reduced: &[BigRational]) -> Vec<BigRational> {
    match datum.family {
        Family::A => {
            let mut v = reduced.to_vec();
            let sum: BigRational = reduced.iter().sum();
            v.push(-sum);
            v
        }
        _ => reduced.to_vec(),
    }
}

/// Jacobian-criterion independence certificate.
///
/// Certifies independence at the first random rational point where the
/// Jacobian (in the reduced chart for family A) reaches full rank. After
/// `trials` failures reports dependence as evidence — not proof, except when
/// a member is exactly zero.
pub fn independence_certificate(
    polys: &[RatPoly],
    k_list: &[usize],
    datum: &RootDatum,
    trials: usize,
    seed: u64,
) -> Result<IndependenceReport, AnalysisError> {
    if polys.is_empty() {
        return Err(AnalysisError::Argument("empty polynomial family".into()));
    }
    if polys.len() != k_list.len() {
        return Err(AnalysisError::Argument(
            "polys and k_list have different lengths".into(),
        ));
    }
    let dim = reduced_dim(datum);
    if polys.len() > dim {
        return Err(AnalysisError::Argument(format!(
            "{} polynomials exceed the effective rank {dim}",
            polys.len()
        )));
    }
    let reduced: Vec<RatPoly> = polys.iter().map(|p| canonical_form(datum, p)).collect();
    let zero_members: Vec<usize> = reduced
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_zero())
        .map(|(i, _)| i)
        .collect();
    let gradients: Vec<Vec<RatPoly>> = reduced
        .iter()
        .map(|p| (0..dim).map(|i| p.partial(i).expect("valid index")).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_rank = 0;
    let full = polys.len();
    for trial in 1..=trials.max(1) {
        let point = random_witness_reduced(dim, &mut rng);
        let jac: Vec<Vec<BigRational>> = gradients
            .iter()
            .map(|grad| {
                grad.iter()
                    .map(|g| g.eval(&point).expect("matching dim"))
                    .collect()
            })
            .collect();
        let rank = rational_rank(jac);
        best_rank = best_rank.max(rank);
        if rank == full && zero_members.is_empty() {
            return Ok(IndependenceReport {
                k_list: k_list.to_vec(),
                witness_point: Some(lift_witness(datum, &point)),
                jacobian_rank: rank,
                independent: true,
                trials_used: trial,
                zero_members,
            });
        }
    }
    Ok(IndependenceReport {
        k_list: k_list.to_vec(),
        witness_point: None,
        jacobian_rank: best_rank,
        independent: false,
        trials_used: trials.max(1),
        zero_members,
    })
}

/// One sampled point of a fail-locus experiment.
#[derive(Debug, Clone)]
pub struct FailLocusRow {
    pub xi: Vec<BigRational>,
    /// Value of the unique degree-m basic invariant at xi.
    pub u_of_xi: BigRational,
    /// Generator coefficient of μ_m.
    pub lambda: BigRational,
    pub mu_zero: bool,
    /// λ(ξ) = 0 exactly when u(ξ) = 0.
    pub equivalence_holds: bool,
}

#[derive(Debug, Clone)]
pub struct FailLocusReport {
    pub m: usize,
    pub generator_name: String,
    pub rows: Vec<FailLocusRow>,
    pub all_hold: bool,
}

/// Check the vanishing criterion in a degree m where the invariant ring is
/// one-dimensional: μ_m vanishes exactly on the zero set of the unique
/// basic invariant u of degree m.
pub fn fail_locus_check(
    datum: &RootDatum,
    m: usize,
    xi_samples: &[Vec<BigRational>],
) -> Result<FailLocusReport, AnalysisError> {
    let gens = basic_invariants(datum);
    let degrees: Vec<usize> = gens.iter().map(|g| g.degree).collect();
    let multisets = generator_multisets(&degrees, m);
    let degree_m_gens: Vec<&BasicInvariant> = gens.iter().filter(|g| g.degree == m).collect();

    if degree_m_gens.len() > 1 {
        let names: Vec<&str> = degree_m_gens.iter().map(|g| g.name.as_str()).collect();
        return Err(AnalysisError::HypothesisViolated(format!(
            "{} has two independent degree-{m} generators ({}): for SO(4k) both the \
             Euler class (coordinate product) and the Pontryagin-type power sum live \
             in that degree, so the invariant space is not one-dimensional",
            datum.label(),
            names.join(", "),
        )));
    }
    if multisets.len() != 1 || multisets[0].len() != 1 {
        return Err(AnalysisError::HypothesisViolated(format!(
            "the degree-{m} invariant space of {} is {}-dimensional, not 1-dimensional",
            datum.label(),
            multisets.len()
        )));
    }
    let gen_index = multisets[0][0];
    let u = &gens[gen_index];

    let mut rows = Vec::with_capacity(xi_samples.len());
    let mut all_hold = true;
    for xi in xi_samples {
        let spec = make_orbit(datum, xi)?;
        let mu = mu_class(&spec, m)?;
        let decomposition = decompose_in_generators(&mu.poly, datum, m)?;
        let lambda = decomposition
            .generator_component
            .iter()
            .find(|(gi, _)| *gi == gen_index)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero);
        let u_of_xi = u.poly.eval(xi).expect("matching dim");
        let holds = lambda.is_zero() == u_of_xi.is_zero() && mu.is_zero == lambda.is_zero();
        all_hold &= holds;
        rows.push(FailLocusRow {
            xi: xi.clone(),
            u_of_xi,
            lambda,
            mu_zero: mu.is_zero,
            equivalence_holds: holds,
        });
    }
    Ok(FailLocusReport {
        m,
        generator_name: u.name.clone(),
        rows,
        all_hold,
    })
}

/// One row of a genericity scan along a parametrized family of orbits.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub t: BigRational,
    pub xi: Vec<BigRational>,
    /// (k, is_zero) per requested class, sorted by k.
    pub mu_zero: Vec<(usize, bool)>,
    pub jacobian_rank: usize,
}

#[derive(Debug, Clone)]
pub struct ScanTable {
    pub k_list: Vec<usize>,
    pub rows: Vec<ScanRow>,
}

/// Evaluate is_zero(μ_k) and the Jacobian rank of the family on a grid of
/// orbits. The grid must consist of valid xi values.
pub fn genericity_scan(
    datum: &RootDatum,
    k_list: &[usize],
    grid: &[(BigRational, Vec<BigRational>)],
    seed: u64,
) -> Result<ScanTable, AnalysisError> {
    let mut ks: Vec<usize> = k_list.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() {
        return Err(AnalysisError::Argument("empty k list".into()));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for (row_index, (t, xi)) in grid.iter().enumerate() {
        let spec = make_orbit(datum, xi)?;
        let mut polys = Vec::with_capacity(ks.len());
        let mut mu_zero = Vec::with_capacity(ks.len());
        for &k in &ks {
            let mu = mu_class(&spec, k)?;
            mu_zero.push((k, mu.is_zero));
            polys.push(mu.poly);
        }
        let report = independence_certificate(
            &polys,
            &ks,
            datum,
            5,
            seed.wrapping_add(row_index as u64),
        )?;
        rows.push(ScanRow {
            t: t.clone(),
            xi: xi.clone(),
            mu_zero,
            jacobian_rank: report.jacobian_rank,
        });
    }
    Ok(ScanTable { k_list: ks, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::weyl_apply;
    use crate::rootdata::{build_root_datum, rational_vec, weyl_elements};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn mu_of(family: Family, rank: usize, xi: &[i64], k: usize) -> crate::muclasses::MuClass {
        let datum = build_root_datum(family, rank).unwrap();
        let spec = make_orbit(&datum, &rational_vec(xi)).unwrap();
        mu_class(&spec, k).unwrap()
    }

    #[test]
    fn is_zero_cases() {
        let a3 = build_root_datum(Family::A, 3).unwrap();
        let mu3 = mu_of(Family::A, 3, &[1, 1, -1, -1], 3);
        assert!(is_zero(&mu3.poly, &a3));
        let mu2 = mu_of(Family::A, 3, &[1, 1, -1, -1], 2);
        assert!(!is_zero(&mu2.poly, &a3));
        assert!(is_zero(&RatPoly::zero(4), &a3));
    }

    #[test]
    fn basic_invariant_sets() {
        let a2 = build_root_datum(Family::A, 2).unwrap();
        let names: Vec<String> = basic_invariants(&a2).iter().map(|g| g.name.clone()).collect();
        assert_eq!(names, vec!["p2", "p3"]);

        let d3 = build_root_datum(Family::D, 3).unwrap();
        let gens = basic_invariants(&d3);
        let described: Vec<(String, usize)> =
            gens.iter().map(|g| (g.name.clone(), g.degree)).collect();
        assert_eq!(
            described,
            vec![("q2".into(), 2), ("pf".into(), 3), ("q4".into(), 4)]
        );
        assert_eq!(gens[1].poly, coordinate_product(3));

        let b2 = build_root_datum(Family::B, 2).unwrap();
        let names: Vec<String> = basic_invariants(&b2).iter().map(|g| g.name.clone()).collect();
        assert_eq!(names, vec!["q2", "q4"]);
    }

    #[test]
    fn basic_invariants_are_weyl_invariant() {
        for (family, rank) in [
            (Family::A, 2),
            (Family::A, 3),
            (Family::B, 2),
            (Family::C, 2),
            (Family::D, 2),
            (Family::D, 3),
            (Family::D, 4),
        ] {
            let datum = build_root_datum(family, rank).unwrap();
            for g in basic_invariants(&datum) {
                for w in weyl_elements(&datum) {
                    assert_eq!(
                        weyl_apply(&w, &g.poly),
                        g.poly,
                        "{} not invariant for {}",
                        g.name,
                        datum.label()
                    );
                }
            }
        }
    }

    #[test]
    fn multiset_enumeration() {
        // degrees of A3: 2,3,4; partitions of 4 are {2,2} and {4}
        assert_eq!(generator_multisets(&[2, 3, 4], 4), vec![vec![0, 0], vec![2]]);
        // degrees of D4: 2,4,4,6
        assert_eq!(
            generator_multisets(&[2, 4, 4, 6], 4),
            vec![vec![0, 0], vec![1], vec![2]]
        );
        assert_eq!(generator_multisets(&[2, 3, 4], 3), vec![vec![1]]);
        assert!(generator_multisets(&[2, 4], 3).is_empty());
    }

    #[test]
    fn rank_basics() {
        let rows = vec![vec![q(1), q(2)], vec![q(2), q(4)], vec![q(0), q(1)]];
        assert_eq!(rational_rank(rows), 2);
        assert_eq!(rational_rank(vec![vec![q(0), q(0)]]), 0);
        assert_eq!(rational_rank(Vec::new()), 0);
    }

    #[test]
    fn mu2_decomposition_is_pure_generator() {
        for (family, rank, xi) in [
            (Family::A, 2, vec![3i64, -1, -2]),
            (Family::B, 2, vec![1, 2]),
            (Family::D, 3, vec![1, 2, 3]),
        ] {
            let datum = build_root_datum(family, rank).unwrap();
            let spec = make_orbit(&datum, &rational_vec(&xi)).unwrap();
            let mu2 = mu_class(&spec, 2).unwrap();
            let dec = decompose_in_generators(&mu2.poly, &datum, 2).unwrap();
            assert_eq!(dec.terms.len(), 1);
            assert_eq!(dec.generator_component.len(), 1);
            assert!(!dec.generator_component[0].1.is_zero());
        }
    }

    #[test]
    fn a3_mu3_generator_component_tracks_cubic() {
        let datum = build_root_datum(Family::A, 3).unwrap();
        let gens = basic_invariants(&datum);
        let p3_index = gens.iter().position(|g| g.name == "p3").unwrap();
        for (xi, expect_zero) in [
            (vec![1i64, 1, -1, -1], true),
            (vec![2, -1, -1, 0], false),
            (vec![1, -1, 0, 0], true),
            (vec![3, 1, -2, -2], false),
        ] {
            let cubic: i64 = xi.iter().map(|x| x * x * x).sum();
            assert_eq!(cubic == 0, expect_zero, "test data sanity");
            let spec = make_orbit(&datum, &rational_vec(&xi)).unwrap();
            let mu3 = mu_class(&spec, 3).unwrap();
            let dec = decompose_in_generators(&mu3.poly, &datum, 3).unwrap();
            let lambda = dec
                .generator_component
                .iter()
                .find(|(gi, _)| *gi == p3_index)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(BigRational::zero);
            assert_eq!(lambda.is_zero(), expect_zero, "xi = {xi:?}");
            assert_eq!(mu3.is_zero, expect_zero);
        }
    }

    #[test]
    fn d4_mu4_pfaffian_component() {
        let datum = build_root_datum(Family::D, 4).unwrap();
        let spec = make_orbit(&datum, &rational_vec(&[1, 1, 1, 1])).unwrap();
        let mu4 = mu_class(&spec, 4).unwrap();
        let dec = decompose_in_generators(&mu4.poly, &datum, 4).unwrap();
        let gens = basic_invariants(&datum);
        let pf_index = gens.iter().position(|g| g.name == "pf").unwrap();
        let pf_coeff = dec
            .generator_component
            .iter()
            .find(|(gi, _)| *gi == pf_index)
            .map(|(_, c)| c.clone())
            .unwrap();
        assert!(!pf_coeff.is_zero());
    }

    #[test]
    fn independence_examples() {
        let a2 = build_root_datum(Family::A, 2).unwrap();
        let generic = make_orbit(&a2, &rational_vec(&[3, -1, -2])).unwrap();
        let polys: Vec<RatPoly> = [2usize, 3]
            .iter()
            .map(|&k| mu_class(&generic, k).unwrap().poly)
            .collect();
        let report = independence_certificate(&polys, &[2, 3], &a2, 25, 7).unwrap();
        assert!(report.independent);
        assert_eq!(report.jacobian_rank, 2);
        assert!(report.witness_point.is_some());
        assert!(report.zero_members.is_empty());

        // flag manifold with vanishing cubic: mu_3 = 0, rank stalls at 1
        let flag = make_orbit(&a2, &rational_vec(&[1, -1, 0])).unwrap();
        let polys: Vec<RatPoly> = [2usize, 3]
            .iter()
            .map(|&k| mu_class(&flag, k).unwrap().poly)
            .collect();
        let report = independence_certificate(&polys, &[2, 3], &a2, 10, 7).unwrap();
        assert!(!report.independent);
        assert_eq!(report.jacobian_rank, 1);
        assert_eq!(report.zero_members, vec![1]);

        // single nonzero polynomial
        let single =
            independence_certificate(&[mu_class(&generic, 2).unwrap().poly], &[2], &a2, 10, 7)
                .unwrap();
        assert!(single.independent);
        assert_eq!(single.jacobian_rank, 1);

        // argument errors
        assert!(matches!(
            independence_certificate(&[], &[], &a2, 10, 7),
            Err(AnalysisError::Argument(_))
        ));
    }

    #[test]
    fn independence_verdict_invariant_under_scaling_and_weyl() {
        let a2 = build_root_datum(Family::A, 2).unwrap();
        let xi = rational_vec(&[3, -1, -2]);
        let assess = |xi: &[BigRational]| {
            let spec = make_orbit(&a2, xi).unwrap();
            let polys: Vec<RatPoly> = [2usize, 3]
                .iter()
                .map(|&k| mu_class(&spec, k).unwrap().poly)
                .collect();
            independence_certificate(&polys, &[2, 3], &a2, 25, 11)
                .unwrap()
                .independent
        };
        let base = assess(&xi);
        assert!(base);
        let t = BigRational::new((-7).into(), 3.into());
        let scaled: Vec<BigRational> = xi.iter().map(|x| x * &t).collect();
        assert_eq!(base, assess(&scaled));
        for w in weyl_elements(&a2).take(3) {
            assert_eq!(base, assess(&w.apply_rational(&xi)));
        }
    }

    #[test]
    fn rank_monotone_in_family_size() {
        let a3 = build_root_datum(Family::A, 3).unwrap();
        let spec = make_orbit(&a3, &rational_vec(&[5, 1, -2, -4])).unwrap();
        let mus: Vec<RatPoly> = [2usize, 3, 4]
            .iter()
            .map(|&k| mu_class(&spec, k).unwrap().poly)
            .collect();
        let mut prev = 0;
        for take in 1..=3 {
            let report =
                independence_certificate(&mus[..take], &[2, 3, 4][..take], &a3, 25, 3).unwrap();
            assert!(report.jacobian_rank <= prev + 1);
            assert!(report.jacobian_rank >= prev);
            prev = report.jacobian_rank;
        }
        assert_eq!(prev, 3);
    }

    #[test]
    fn fail_locus_a3_and_d3() {
        let a3 = build_root_datum(Family::A, 3).unwrap();
        let grid: Vec<Vec<BigRational>> =
            [vec![1i64, 1, -1, -1], vec![2, -1, -1, 0], vec![1, -1, 0, 0]]
                .iter()
                .map(|v| rational_vec(v))
                .collect();
        let report = fail_locus_check(&a3, 3, &grid).unwrap();
        assert!(report.all_hold);
        assert_eq!(report.generator_name, "p3");
        assert_eq!(
            report.rows.iter().map(|r| r.mu_zero).collect::<Vec<_>>(),
            vec![true, false, true]
        );

        let d3 = build_root_datum(Family::D, 3).unwrap();
        let grid: Vec<Vec<BigRational>> = [vec![1i64, 2, 0], vec![1, 2, 3]]
            .iter()
            .map(|v| rational_vec(v))
            .collect();
        let report = fail_locus_check(&d3, 3, &grid).unwrap();
        assert!(report.all_hold);
        assert_eq!(report.generator_name, "pf");
        assert_eq!(
            report.rows.iter().map(|r| r.mu_zero).collect::<Vec<_>>(),
            vec![true, false]
        );
    }

    #[test]
    fn fail_locus_hypothesis_guard() {
        let d4 = build_root_datum(Family::D, 4).unwrap();
        let err = fail_locus_check(&d4, 4, &[rational_vec(&[1, 2, 3, 4])]).unwrap_err();
        match err {
            AnalysisError::HypothesisViolated(msg) => {
                assert!(msg.contains("two independent degree-4 generators"), "{msg}");
                assert!(msg.contains("pf"), "{msg}");
            }
            other => panic!("expected hypothesis violation, got {other}"),
        }

        // degree with products only (A2 in degree 4: p2^2) also violates
        let a2 = build_root_datum(Family::A, 2).unwrap();
        assert!(matches!(
            fail_locus_check(&a2, 4, &[rational_vec(&[3, -1, -2])]),
            Err(AnalysisError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn scan_lines() {
        // A3 line (1+t, 1-t, -1, -1): sum of cubes is 6t^2, vanishing only at t=0
        let a3 = build_root_datum(Family::A, 3).unwrap();
        let grid: Vec<(BigRational, Vec<BigRational>)> = (-5i64..=5)
            .map(|t| (q(t), rational_vec(&[1 + t, 1 - t, -1, -1])))
            .collect();
        let table = genericity_scan(&a3, &[2, 3], &grid, 91).unwrap();
        let zero_rows: Vec<&ScanRow> = table
            .rows
            .iter()
            .filter(|r| r.mu_zero.iter().any(|&(k, z)| k == 3 && z))
            .collect();
        assert_eq!(zero_rows.len(), 1);
        assert_eq!(zero_rows[0].t, q(0));

        // D3 line (1,2,t): Pfaffian vanishes only at t=0
        let d3 = build_root_datum(Family::D, 3).unwrap();
        let grid: Vec<(BigRational, Vec<BigRational>)> =
            (-5i64..=5).map(|t| (q(t), rational_vec(&[1, 2, t]))).collect();
        let table = genericity_scan(&d3, &[2, 3], &grid, 91).unwrap();
        let zero_count = table
            .rows
            .iter()
            .filter(|r| r.mu_zero.iter().any(|&(k, z)| k == 3 && z))
            .count();
        assert_eq!(zero_count, 1);
        // full rank away from the bad point
        for row in &table.rows {
            if row.t != q(0) {
                assert_eq!(row.jacobian_rank, 2, "t = {}", row.t);
            }
        }
    }
}
