//! Coupling class and the characteristic classes μ_k of coadjoint orbits.
//!
//! For an orbit M_ξ = G/G_ξ the universal Hamiltonian fibration is
//! M_ξ → BG_ξ → BG. In the Borel model H*(BT) is the polynomial ring on the
//! Cartan algebra and H*(BG) its Weyl-invariant subring; fibre integration
//! becomes algebra:
//!
//! ```text
//! μ_k = antisym(ℓ_ξ^{n+k} · ∏_{α ∈ R_ξ⁺} α) / ( |W_ξ| · ∏_{α ∈ R⁺} α )
//! ```
//!
//! where ℓ_ξ = ⟨ξ, ·⟩ is the coupling form, n the complex dimension of the
//! orbit, and the stabilizer factor ∏_{α∈R_ξ⁺} α is the Euler class of the
//! fibre G_ξ/T whose Weyl group has order |W_ξ|. Every division is exact and
//! checked; a nonzero remainder aborts with an internal error because it can
//! only mean a bug in the alternation pipeline.

use num::{BigRational, One};
use thiserror::Error;

use crate::polyring::{
    antisymmetrize_linear_power, canonical_form, divide_exact_linear, PolyError, RatPoly,
};
use crate::rootdata::{stabilizer_subsystem, RootDataError, RootDatum};

#[derive(Debug, Error)]
pub enum MuError {
    #[error(transparent)]
    Datum(#[from] RootDataError),
    #[error("invalid k = {0}: need k >= 1")]
    BadK(usize),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl From<PolyError> for MuError {
    fn from(e: PolyError) -> Self {
        MuError::Internal(e.to_string())
    }
}

/// A coadjoint orbit specified by a rational point of the Cartan algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSpec {
    pub datum: RootDatum,
    pub xi: Vec<BigRational>,
    /// Positive roots vanishing on xi (root system of the stabilizer).
    pub r_xi_pos: Vec<Vec<i64>>,
    /// Order of the Weyl stabilizer of xi.
    pub w_xi_order: u64,
    /// Half the real dimension of the orbit: |R⁺| − |R_ξ⁺|.
    pub n: usize,
}

/// A computed class μ_k.
#[derive(Debug, Clone, PartialEq)]
pub struct MuClass {
    pub k: usize,
    /// Weyl-invariant polynomial of degree k in the ambient coordinates
    /// (family A polynomials are only meaningful modulo the traceless ideal).
    pub poly: RatPoly,
    pub orbit: OrbitSpec,
    pub is_zero: bool,
}

/// Validate xi and derive the stabilizer data.
pub fn make_orbit(datum: &RootDatum, xi: &[BigRational]) -> Result<OrbitSpec, MuError> {
    let (r_xi_pos, w_xi_order) = stabilizer_subsystem(datum, xi)?;
    let n = datum.positive_roots.len() - r_xi_pos.len();
    debug_assert!(n >= 1, "nonzero xi cannot annihilate every root");
    Ok(OrbitSpec {
        datum: datum.clone(),
        xi: xi.to_vec(),
        r_xi_pos,
        w_xi_order,
        n,
    })
}

/// The coupling form in the Borel model: the linear form ⟨ξ, x⟩.
///
/// G semisimple gives H²(BG) = 0, so the normalization condition
/// π_!(Ω^{n+1}) = 0 holds with no correction term; `mu_class(spec, 1)`
/// computing to zero is the recorded assertion of that fact.
pub fn coupling_form(spec: &OrbitSpec) -> RatPoly {
    RatPoly::linear_form(&spec.xi)
}

/// Product of the positive roots vanishing on xi, as a polynomial.
pub fn stabilizer_euler_factor(spec: &OrbitSpec) -> RatPoly {
    let d = spec.datum.ambient_dim;
    spec.r_xi_pos
        .iter()
        .fold(RatPoly::one(d), |acc, root| {
            acc.try_mul(&RatPoly::linear_from_ints(root)).expect("same dim")
        })
}

/// Compute μ_k for the orbit by the pushforward formula.
pub fn mu_class(spec: &OrbitSpec, k: usize) -> Result<MuClass, MuError> {
    if k < 1 {
        return Err(MuError::BadK(k));
    }
    let datum = &spec.datum;
    let power = (spec.n + k) as u32;
    let euler = stabilizer_euler_factor(spec);

    let numerator = antisymmetrize_linear_power(datum, &spec.xi, power, &euler);

    if spec.w_xi_order > 1 {
        // Cross-check: without the stabilizer Euler factor the alternation
        // kills the W_ξ-invariant power entirely.
        let bare = antisymmetrize_linear_power(datum, &spec.xi, power, &RatPoly::one(datum.ambient_dim));
        if !bare.is_zero() {
            return Err(MuError::Internal(format!(
                "alternation of the bare coupling power is nonzero for degenerate xi \
                 (|W_xi| = {}): {}",
                spec.w_xi_order, bare
            )));
        }
    }

    let mut quotient = numerator;
    for root in &datum.positive_roots {
        quotient = divide_exact_linear(&quotient, &RatPoly::linear_from_ints(root))?;
    }
    let w_xi = BigRational::from_integer(spec.w_xi_order.into());
    let poly = quotient.scale(&(BigRational::one() / w_xi));

    if let Some(deg) = poly.homogeneous_degree() {
        if deg != k as u32 {
            return Err(MuError::Internal(format!(
                "mu_{k} came out with degree {deg}"
            )));
        }
    } else if !poly.is_zero() {
        return Err(MuError::Internal(format!("mu_{k} is not homogeneous")));
    }

    let is_zero = canonical_form(datum, &poly).is_zero();
    Ok(MuClass {
        k,
        poly,
        orbit: spec.clone(),
        is_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{antisymmetrize, weyl_apply, RatPoly};
    use crate::rootdata::{build_root_datum, rational_vec, weyl_elements, Family};
    use num::Zero;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn orbit(family: Family, rank: usize, xi: &[i64]) -> OrbitSpec {
        let datum = build_root_datum(family, rank).unwrap();
        make_orbit(&datum, &rational_vec(xi)).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let g24 = orbit(Family::A, 3, &[1, 1, -1, -1]);
        assert_eq!(g24.n, 4); // complex dimension of G(2,4)
        assert_eq!(g24.w_xi_order, 4);

        let so8u4 = orbit(Family::D, 4, &[1, 1, 1, 1]);
        assert_eq!(so8u4.n, 6); // complex dimension of SO(8)/U(4)
        assert_eq!(so8u4.w_xi_order, 24);

        let datum = build_root_datum(Family::A, 2).unwrap();
        assert!(matches!(
            make_orbit(&datum, &rational_vec(&[0, 0, 0])),
            Err(MuError::Datum(RootDataError::TrivialOrbit))
        ));
        assert!(matches!(
            make_orbit(&datum, &rational_vec(&[1, 1, 1])),
            Err(MuError::Datum(RootDataError::NotTraceless(_)))
        ));
    }

    #[test]
    fn coupling_form_is_the_pairing() {
        let spec = orbit(Family::B, 3, &[1, -1, 0]);
        assert_eq!(coupling_form(&spec), RatPoly::linear_from_ints(&[1, -1, 0]));
        // linearity in xi
        let scaled = orbit(Family::B, 3, &[3, -3, 0]);
        assert_eq!(
            coupling_form(&scaled),
            coupling_form(&spec).scale(&q(3))
        );
    }

    #[test]
    fn su2_mu2_frozen_value() {
        // Oracle: by hand, antisym(ℓ^3) = 2(x1-x2)^3 and dividing by the
        // positive root x1-x2 leaves 2(x1-x2)^2.
        let spec = orbit(Family::A, 1, &[1, -1]);
        let mu2 = mu_class(&spec, 2).unwrap();
        let expected = RatPoly::from_terms(
            2,
            [(vec![2, 0], q(2)), (vec![1, 1], q(-4)), (vec![0, 2], q(2))],
        );
        assert_eq!(mu2.poly, expected);
        assert!(!mu2.is_zero);

        // independent route: generic antisymmetrization and multiply-back
        let datum = &spec.datum;
        let ell = coupling_form(&spec);
        let alt = antisymmetrize(datum, &ell.pow(3));
        let root = RatPoly::linear_from_ints(&[1, -1]);
        assert_eq!(mu2.poly.try_mul(&root).unwrap(), alt);
    }

    #[test]
    fn su2_odd_classes_vanish() {
        let spec = orbit(Family::A, 1, &[1, -1]);
        for k in [3usize, 5] {
            let mu = mu_class(&spec, k).unwrap();
            assert!(mu.poly.is_zero(), "mu_{k} should vanish for SU(2)");
            assert!(mu.is_zero);
        }
    }

    #[test]
    fn grassmannian_mu3_vanishes() {
        let spec = orbit(Family::A, 3, &[1, 1, -1, -1]);
        let mu3 = mu_class(&spec, 3).unwrap();
        assert!(mu3.is_zero);
        let mu2 = mu_class(&spec, 2).unwrap();
        assert!(!mu2.is_zero);
    }

    #[test]
    fn flag_su3_mu3_vanishes_for_cubic_zero() {
        // xi = (1,-1,0) is regular but sums of cubes vanish
        let spec = orbit(Family::A, 2, &[1, -1, 0]);
        assert_eq!(spec.w_xi_order, 1);
        let mu3 = mu_class(&spec, 3).unwrap();
        assert!(mu3.poly.is_zero(), "mu_3 vanishes identically in the chart");
        let mu2 = mu_class(&spec, 2).unwrap();
        assert!(!mu2.is_zero);
    }

    #[test]
    fn d4_mu4_has_pfaffian_component() {
        let spec = orbit(Family::D, 4, &[1, 1, 1, 1]);
        let mu4 = mu_class(&spec, 4).unwrap();
        assert!(!mu4.is_zero);
        let pf_coeff = mu4.poly.coefficient(&[1, 1, 1, 1]);
        assert!(!pf_coeff.is_zero(), "Euler component must be nonzero");
    }

    #[test]
    fn mu1_is_exactly_zero() {
        for spec in [
            orbit(Family::A, 1, &[1, -1]),
            orbit(Family::A, 2, &[3, -1, -2]),
            orbit(Family::A, 3, &[1, 1, -1, -1]),
            orbit(Family::B, 2, &[1, 2]),
            orbit(Family::C, 2, &[1, 2]),
            orbit(Family::D, 3, &[1, 2, 3]),
            orbit(Family::D, 4, &[1, 1, 1, 1]),
        ] {
            let mu1 = mu_class(&spec, 1).unwrap();
            // exactly zero in the ambient chart, not just modulo traceless
            assert!(
                mu1.poly.is_zero(),
                "pushforward of Omega^(n+1) must vanish for {}",
                spec.datum.label()
            );
        }
    }

    #[test]
    fn weyl_invariance_of_mu() {
        for (spec, ks) in [
            (orbit(Family::A, 2, &[3, -1, -2]), vec![2usize, 3]),
            (orbit(Family::B, 2, &[1, 2]), vec![2, 4]),
            (orbit(Family::D, 3, &[1, 2, 3]), vec![2, 3, 4]),
        ] {
            for k in ks {
                let mu = mu_class(&spec, k).unwrap();
                for w in weyl_elements(&spec.datum) {
                    assert_eq!(weyl_apply(&w, &mu.poly), mu.poly);
                }
            }
        }
    }

    #[test]
    fn scaling_law() {
        let datum = build_root_datum(Family::A, 2).unwrap();
        let xi = rational_vec(&[3, -1, -2]);
        let base = make_orbit(&datum, &xi).unwrap();
        for (num, den) in [(2i64, 1i64), (-1, 1), (1, 3)] {
            let t = BigRational::new(num.into(), den.into());
            let scaled_xi: Vec<BigRational> = xi.iter().map(|x| x * &t).collect();
            let scaled = make_orbit(&datum, &scaled_xi).unwrap();
            for k in [2usize, 3] {
                let lhs = mu_class(&scaled, k).unwrap().poly;
                let mut factor = BigRational::one();
                for _ in 0..(base.n + k) {
                    factor *= &t;
                }
                let rhs = mu_class(&base, k).unwrap().poly.scale(&factor);
                assert_eq!(lhs, rhs, "scaling law fails at t = {t}, k = {k}");
            }
        }
    }

    #[test]
    fn regular_orbits_transform_by_sign() {
        // for regular xi the formula is antisym(ℓ^{n+k})/∏α and replacing xi
        // by w·xi multiplies the class by sign(w)
        let datum = build_root_datum(Family::D, 3).unwrap();
        let xi = rational_vec(&[1, 2, 3]);
        let base = make_orbit(&datum, &xi).unwrap();
        let mu = mu_class(&base, 3).unwrap().poly;
        for w in weyl_elements(&datum).take(8) {
            let moved = make_orbit(&datum, &w.apply_rational(&xi)).unwrap();
            let mu_w = mu_class(&moved, 3).unwrap().poly;
            let expected = if w.sign() < 0 { mu.neg() } else { mu.clone() };
            assert_eq!(mu_w, expected);
        }
    }

    #[test]
    fn bad_k_rejected() {
        let spec = orbit(Family::A, 1, &[1, -1]);
        assert!(matches!(mu_class(&spec, 0), Err(MuError::BadK(0))));
    }
}
