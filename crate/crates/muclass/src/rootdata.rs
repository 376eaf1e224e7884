//! Classical root systems and their Weyl groups.
//!
//! Types A/B/C/D are realized in the standard integer coordinates:
//! A_r lives in d = r+1 coordinates (roots e_i − e_j), B_r/C_r/D_r in d = r.
//! Weyl groups are enumerated exhaustively as signed permutations; the rank
//! cap keeps the largest group at 2^7·7! elements, which brute force handles
//! comfortably.

use num::{BigRational, Zero};
use thiserror::Error;

/// Enumeration is exhaustive, so ranks are capped.
pub const MAX_RANK: usize = 7;
/// Largest ambient dimension (A_7 uses 8 coordinates).
pub const MAX_DIM: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootDataError {
    #[error("unsupported datum: {0}")]
    Unsupported(String),
    #[error("trivial orbit: xi = 0")]
    TrivialOrbit,
    #[error("xi has length {got}, expected {want}")]
    XiLength { got: usize, want: usize },
    #[error("family A requires sum(xi) = 0, got {0}")]
    NotTraceless(String),
}

/// The four classical families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s.trim() {
            "A" | "a" => Some(Family::A),
            "B" | "b" => Some(Family::B),
            "C" | "c" => Some(Family::C),
            "D" | "d" => Some(Family::D),
            _ => None,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        }
    }

    /// Compact-group label, e.g. A_3 -> "SU(4)".
    pub fn group_label(self, rank: usize) -> String {
        match self {
            Family::A => format!("SU({})", rank + 1),
            Family::B => format!("SO({})", 2 * rank + 1),
            Family::C => format!("Sp({rank})"),
            Family::D => format!("SO({})", 2 * rank),
        }
    }
}

/// A classical root system with the data the pushforward needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub family: Family,
    pub rank: usize,
    /// Number of coordinates: rank+1 for A, rank otherwise.
    pub ambient_dim: usize,
    /// Positive roots as integer coordinate vectors of length `ambient_dim`.
    pub positive_roots: Vec<Vec<i64>>,
    pub weyl_order: u64,
    /// Degrees of the basic Weyl-invariant polynomials (sorted multiset).
    pub invariant_degrees: Vec<usize>,
}

impl RootDatum {
    pub fn label(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }
}

/// Signed permutation of the coordinates: `e_i -> sign_i * e_{perm_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeylElement {
    dim: u8,
    perm: [u8; MAX_DIM],
    /// Bit i set means coordinate i picks up a minus sign.
    flips: u8,
    det: i8,
}

impl WeylElement {
    fn new(dim: usize, perm: &[usize], flips: u8) -> WeylElement {
        debug_assert!(dim <= MAX_DIM && perm.len() == dim);
        let mut p = [0u8; MAX_DIM];
        for (i, &v) in perm.iter().enumerate() {
            p[i] = v as u8;
        }
        let parity = permutation_parity(perm);
        let flip_parity = if flips.count_ones() % 2 == 0 { 1 } else { -1 };
        WeylElement {
            dim: dim as u8,
            perm: p,
            flips,
            det: parity * flip_parity,
        }
    }

    pub fn identity(dim: usize) -> WeylElement {
        let perm: Vec<usize> = (0..dim).collect();
        WeylElement::new(dim, &perm, 0)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    /// Determinant of the signed permutation matrix.
    pub fn sign(&self) -> i8 {
        self.det
    }

    /// Image index of coordinate `i`.
    pub fn image(&self, i: usize) -> usize {
        self.perm[i] as usize
    }

    /// Sign attached to source coordinate `i`.
    pub fn coordinate_sign(&self, i: usize) -> i8 {
        if self.flips & (1 << i) != 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let d = self.dim();
        let mut perm = vec![0usize; d];
        let mut flips = 0u8;
        for i in 0..d {
            let j = self.image(i);
            perm[j] = i;
            if self.coordinate_sign(i) < 0 {
                flips |= 1 << j;
            }
        }
        WeylElement::new(d, &perm, flips)
    }

    /// Apply to a rational vector: `(w v)_{perm(i)} = sign_i v_i`.
    pub fn apply_rational(&self, v: &[BigRational]) -> Vec<BigRational> {
        debug_assert_eq!(v.len(), self.dim());
        let mut out = vec![BigRational::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            let y = if self.coordinate_sign(i) < 0 { -x } else { x.clone() };
            out[self.image(i)] = y;
        }
        out
    }

    pub fn apply_int(&self, v: &[i64]) -> Vec<i64> {
        debug_assert_eq!(v.len(), self.dim());
        let mut out = vec![0i64; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.image(i)] = i64::from(self.coordinate_sign(i)) * x;
        }
        out
    }

    pub fn fixes_rational(&self, v: &[BigRational]) -> bool {
        self.apply_rational(v) == v
    }
}

fn permutation_parity(perm: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn unit(d: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0i64; d];
    v[i] = c;
    v
}

fn two_unit(d: usize, i: usize, ci: i64, j: usize, cj: i64) -> Vec<i64> {
    let mut v = vec![0i64; d];
    v[i] = ci;
    v[j] = cj;
    v
}

/// Build the root datum for a classical family at the given rank.
pub fn build_root_datum(family: Family, rank: usize) -> Result<RootDatum, RootDataError> {
    if rank < 1 {
        return Err(RootDataError::Unsupported(format!(
            "{}{rank}: rank must be at least 1",
            family.letter()
        )));
    }
    if family == Family::D && rank < 2 {
        return Err(RootDataError::Unsupported(
            "D1: family D requires rank >= 2".into(),
        ));
    }
    if rank > MAX_RANK {
        return Err(RootDataError::Unsupported(format!(
            "{}{rank}: rank cap is {MAX_RANK} (exhaustive Weyl enumeration)",
            family.letter()
        )));
    }

    let (ambient_dim, positive_roots, weyl_order, invariant_degrees) = match family {
        Family::A => {
            let d = rank + 1;
            let mut roots = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    roots.push(two_unit(d, i, 1, j, -1));
                }
            }
            let degrees: Vec<usize> = (2..=d).collect();
            (d, roots, factorial(d), degrees)
        }
        Family::B => {
            let d = rank;
            let mut roots = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    roots.push(two_unit(d, i, 1, j, -1));
                    roots.push(two_unit(d, i, 1, j, 1));
                }
            }
            for i in 0..d {
                roots.push(unit(d, i, 1));
            }
            let degrees: Vec<usize> = (1..=d).map(|j| 2 * j).collect();
            (d, roots, (1u64 << d) * factorial(d), degrees)
        }
        Family::C => {
            let d = rank;
            let mut roots = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    roots.push(two_unit(d, i, 1, j, -1));
                    roots.push(two_unit(d, i, 1, j, 1));
                }
            }
            for i in 0..d {
                roots.push(unit(d, i, 2));
            }
            let degrees: Vec<usize> = (1..=d).map(|j| 2 * j).collect();
            (d, roots, (1u64 << d) * factorial(d), degrees)
        }
        Family::D => {
            let d = rank;
            let mut roots = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    roots.push(two_unit(d, i, 1, j, -1));
                    roots.push(two_unit(d, i, 1, j, 1));
                }
            }
            let mut degrees: Vec<usize> = (1..d).map(|j| 2 * j).collect();
            degrees.push(d);
            degrees.sort_unstable();
            (d, roots, (1u64 << (d - 1)) * factorial(d), degrees)
        }
    };

    Ok(RootDatum {
        family,
        rank,
        ambient_dim,
        positive_roots,
        weyl_order,
        invariant_degrees,
    })
}

/// Enumerate the full Weyl group as signed permutations, in a fixed order.
///
/// Family A: plain permutations. B/C: all sign patterns. D: even sign
/// patterns only. The stream is stateless: calling again restarts it.
pub fn weyl_elements(datum: &RootDatum) -> impl Iterator<Item = WeylElement> + '_ {
    use itertools::Itertools;
    let d = datum.ambient_dim;
    let family = datum.family;
    (0..d).permutations(d).flat_map(move |perm| {
        let masks: Vec<u8> = match family {
            Family::A => vec![0],
            Family::B | Family::C => (0..(1u16 << d)).map(|m| m as u8).collect(),
            Family::D => (0..(1u16 << d))
                .map(|m| m as u8)
                .filter(|m| m.count_ones() % 2 == 0)
                .collect(),
        };
        masks
            .into_iter()
            .map(move |mask| WeylElement::new(d, &perm, mask))
            .collect::<Vec<_>>()
    })
}

/// The degree multiset 𝒦 of basic invariants: the k with nontrivial rational
/// homotopy of BG in degree 2k. For D_{2m} the degree m carries multiplicity
/// two (even power sum and Pfaffian).
pub fn kset(datum: &RootDatum) -> Vec<usize> {
    datum.invariant_degrees.clone()
}

/// Exact rational pairing of an integer root with a rational vector.
pub fn root_dot(root: &[i64], xi: &[BigRational]) -> BigRational {
    root.iter()
        .zip(xi)
        .map(|(&c, x)| BigRational::from_integer(c.into()) * x)
        .sum()
}

/// Validate a coadjoint point for the datum: correct length, nonzero, and
/// traceless for family A.
pub fn validate_xi(datum: &RootDatum, xi: &[BigRational]) -> Result<(), RootDataError> {
    if xi.len() != datum.ambient_dim {
        return Err(RootDataError::XiLength {
            got: xi.len(),
            want: datum.ambient_dim,
        });
    }
    if xi.iter().all(|x| x.is_zero()) {
        return Err(RootDataError::TrivialOrbit);
    }
    if datum.family == Family::A {
        let sum: BigRational = xi.iter().sum();
        if !sum.is_zero() {
            return Err(RootDataError::NotTraceless(sum.to_string()));
        }
    }
    Ok(())
}

/// Positive roots vanishing on xi, and the order of the Weyl stabilizer.
///
/// Both are computed by brute force; the stabilizer is a reflection group on
/// the vanishing roots, so its order divides the full Weyl order.
pub fn stabilizer_subsystem(
    datum: &RootDatum,
    xi: &[BigRational],
) -> Result<(Vec<Vec<i64>>, u64), RootDataError> {
    validate_xi(datum, xi)?;
    let r_xi: Vec<Vec<i64>> = datum
        .positive_roots
        .iter()
        .filter(|root| root_dot(root, xi).is_zero())
        .cloned()
        .collect();
    let w_xi = weyl_elements(datum).filter(|w| w.fixes_rational(xi)).count() as u64;
    Ok((r_xi, w_xi))
}

/// Draw a random integer xi valid for the datum (traceless for A), with
/// entries in [-9, 9]. Used by randomized test sweeps.
pub fn random_xi<R: rand::Rng>(datum: &RootDatum, rng: &mut R) -> Vec<BigRational> {
    let d = datum.ambient_dim;
    loop {
        let mut coords: Vec<i64> = (0..d).map(|_| rng.random_range(-9..=9)).collect();
        if datum.family == Family::A {
            let partial: i64 = coords[..d - 1].iter().sum();
            coords[d - 1] = -partial;
        }
        if coords.iter().any(|&c| c != 0) {
            return coords
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect();
        }
    }
}

/// Convenience: rationals from integer coordinates.
pub fn rational_vec(coords: &[i64]) -> Vec<BigRational> {
    coords
        .iter()
        .map(|&c| BigRational::from_integer(c.into()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(family: Family, rank: usize) -> (usize, u64, u64) {
        let d = build_root_datum(family, rank).unwrap();
        let degree_product: u64 = d.invariant_degrees.iter().map(|&x| x as u64).product();
        (d.positive_roots.len(), d.weyl_order, degree_product)
    }

    #[test]
    fn root_counts_and_weyl_orders() {
        for r in 1..=5 {
            let (na, wa, pa) = counts(Family::A, r);
            assert_eq!(na, (r + 1) * r / 2);
            assert_eq!(wa, factorial(r + 1));
            assert_eq!(pa, wa, "Chevalley degree identity for A{r}");

            let (nb, wb, pb) = counts(Family::B, r);
            assert_eq!(nb, r * r);
            assert_eq!(wb, (1 << r) * factorial(r));
            assert_eq!(pb, wb);

            let (nc, wc, pc) = counts(Family::C, r);
            assert_eq!(nc, r * r);
            assert_eq!(wc, wb);
            assert_eq!(pc, wc);

            if r >= 2 {
                let (nd, wd, pd) = counts(Family::D, r);
                assert_eq!(nd, r * (r - 1));
                assert_eq!(wd, (1 << (r - 1)) * factorial(r));
                assert_eq!(pd, wd);
            }
        }
    }

    #[test]
    fn a3_and_d_examples() {
        let a3 = build_root_datum(Family::A, 3).unwrap();
        assert_eq!(a3.positive_roots.len(), 6);
        assert_eq!(a3.weyl_order, 24);
        assert_eq!(a3.invariant_degrees, vec![2, 3, 4]);

        let d3 = build_root_datum(Family::D, 3).unwrap();
        assert_eq!(d3.positive_roots.len(), 6);
        assert_eq!(d3.weyl_order, 24);
        assert_eq!(d3.invariant_degrees, vec![2, 3, 4]);

        let d4 = build_root_datum(Family::D, 4).unwrap();
        assert_eq!(d4.positive_roots.len(), 12);
        assert_eq!(d4.weyl_order, 192);
        assert_eq!(d4.invariant_degrees, vec![2, 4, 4, 6]);
    }

    #[test]
    fn unsupported_data() {
        assert!(matches!(
            build_root_datum(Family::A, 0),
            Err(RootDataError::Unsupported(_))
        ));
        assert!(matches!(
            build_root_datum(Family::D, 1),
            Err(RootDataError::Unsupported(_))
        ));
        assert!(matches!(
            build_root_datum(Family::B, 8),
            Err(RootDataError::Unsupported(_))
        ));
    }

    #[test]
    fn enumeration_counts_and_constraints() {
        for (family, rank) in [
            (Family::A, 1),
            (Family::A, 3),
            (Family::B, 2),
            (Family::C, 2),
            (Family::D, 2),
            (Family::D, 3),
        ] {
            let datum = build_root_datum(family, rank).unwrap();
            let elements: Vec<_> = weyl_elements(&datum).collect();
            assert_eq!(elements.len() as u64, datum.weyl_order);
            let mut seen = std::collections::HashSet::new();
            for w in &elements {
                assert!(seen.insert((w.perm, w.flips)), "duplicate element");
                let neg = (0..w.dim()).filter(|&i| w.coordinate_sign(i) < 0).count();
                match family {
                    Family::A => assert_eq!(neg, 0),
                    Family::D => assert_eq!(neg % 2, 0),
                    _ => {}
                }
                // sign = parity * product of coordinate signs
                let perm: Vec<usize> = (0..w.dim()).map(|i| w.image(i)).collect();
                let prod: i8 = (0..w.dim()).map(|i| w.coordinate_sign(i)).product();
                assert_eq!(w.sign(), permutation_parity(&perm) * prod);
            }
        }
    }

    #[test]
    fn a1_d2_b2_element_counts() {
        let a1 = build_root_datum(Family::A, 1).unwrap();
        let els: Vec<_> = weyl_elements(&a1).collect();
        assert_eq!(els.len(), 2);
        let signs: Vec<i8> = els.iter().map(|w| w.sign()).collect();
        assert!(signs.contains(&1) && signs.contains(&-1));

        let d2 = build_root_datum(Family::D, 2).unwrap();
        assert_eq!(weyl_elements(&d2).count(), 4);

        let b2 = build_root_datum(Family::B, 2).unwrap();
        assert_eq!(weyl_elements(&b2).count(), 8);
    }

    #[test]
    fn weyl_elements_permute_roots_and_preserve_pairing() {
        for (family, rank) in [(Family::A, 2), (Family::B, 2), (Family::D, 3)] {
            let datum = build_root_datum(family, rank).unwrap();
            let root_set: std::collections::HashSet<Vec<i64>> = datum
                .positive_roots
                .iter()
                .flat_map(|r| {
                    let neg: Vec<i64> = r.iter().map(|c| -c).collect();
                    [r.clone(), neg]
                })
                .collect();
            for w in weyl_elements(&datum) {
                for root in &datum.positive_roots {
                    let image = w.apply_int(root);
                    assert!(root_set.contains(&image), "w does not preserve the root set");
                    let norm: i64 = root.iter().map(|c| c * c).sum();
                    let inorm: i64 = image.iter().map(|c| c * c).sum();
                    assert_eq!(norm, inorm, "w is not an isometry");
                }
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let datum = build_root_datum(Family::B, 3).unwrap();
        let v = rational_vec(&[3, -1, 7]);
        for w in weyl_elements(&datum) {
            let back = w.inverse().apply_rational(&w.apply_rational(&v));
            assert_eq!(back, v);
            assert_eq!(w.sign() * w.inverse().sign(), 1);
        }
    }

    #[test]
    fn kset_examples() {
        let a3 = build_root_datum(Family::A, 3).unwrap();
        assert_eq!(kset(&a3), vec![2, 3, 4]);
        let d4 = build_root_datum(Family::D, 4).unwrap();
        assert_eq!(kset(&d4), vec![2, 4, 4, 6]);
        let a1 = build_root_datum(Family::A, 1).unwrap();
        assert_eq!(kset(&a1), vec![2]);
        let b3 = build_root_datum(Family::B, 3).unwrap();
        assert_eq!(kset(&b3), vec![2, 4, 6]);
    }

    #[test]
    fn stabilizer_grassmannian() {
        // Oracle: the roots killing (1,1,-1,-1) are e1-e2 and e3-e4 by direct
        // inspection, and the fixing permutations are S2 x S2.
        let a3 = build_root_datum(Family::A, 3).unwrap();
        let xi = rational_vec(&[1, 1, -1, -1]);
        let (r_xi, w_xi) = stabilizer_subsystem(&a3, &xi).unwrap();
        let expected: Vec<Vec<i64>> = vec![vec![1, -1, 0, 0], vec![0, 0, 1, -1]];
        assert_eq!(r_xi, expected);
        assert_eq!(w_xi, 4);
        // half-dimension of G(2,4)
        assert_eq!(a3.positive_roots.len() - r_xi.len(), 4);
    }

    #[test]
    fn stabilizer_so8_u4() {
        let d4 = build_root_datum(Family::D, 4).unwrap();
        let xi = rational_vec(&[1, 1, 1, 1]);
        let (r_xi, w_xi) = stabilizer_subsystem(&d4, &xi).unwrap();
        assert_eq!(r_xi.len(), 6);
        for root in &r_xi {
            // only the e_i - e_j roots survive: coordinate sum zero
            assert_eq!(root.iter().sum::<i64>(), 0);
        }
        assert_eq!(w_xi, 24);
        assert_eq!(d4.positive_roots.len() - r_xi.len(), 6);
    }

    #[test]
    fn stabilizer_generic_a2() {
        let a2 = build_root_datum(Family::A, 2).unwrap();
        let xi = rational_vec(&[3, -1, -2]);
        let (r_xi, w_xi) = stabilizer_subsystem(&a2, &xi).unwrap();
        assert!(r_xi.is_empty());
        assert_eq!(w_xi, 1);
    }

    #[test]
    fn stabilizer_rejects_bad_xi() {
        let a2 = build_root_datum(Family::A, 2).unwrap();
        assert_eq!(
            stabilizer_subsystem(&a2, &rational_vec(&[0, 0, 0])).unwrap_err(),
            RootDataError::TrivialOrbit
        );
        assert!(matches!(
            stabilizer_subsystem(&a2, &rational_vec(&[1, 1, 1])).unwrap_err(),
            RootDataError::NotTraceless(_)
        ));
        assert!(matches!(
            stabilizer_subsystem(&a2, &rational_vec(&[1, -1])).unwrap_err(),
            RootDataError::XiLength { .. }
        ));
    }

    #[test]
    fn stabilizer_scale_invariance() {
        let d3 = build_root_datum(Family::D, 3).unwrap();
        let xi = rational_vec(&[1, 2, 0]);
        let base = stabilizer_subsystem(&d3, &xi).unwrap();
        for t in [2i64, -1, 5] {
            let scaled: Vec<BigRational> = xi
                .iter()
                .map(|x| x * BigRational::from_integer(t.into()))
                .collect();
            assert_eq!(stabilizer_subsystem(&d3, &scaled).unwrap(), base);
        }
        // rational scaling too
        let third = BigRational::new(1.into(), 3.into());
        let scaled: Vec<BigRational> = xi.iter().map(|x| x * &third).collect();
        assert_eq!(stabilizer_subsystem(&d3, &scaled).unwrap(), base);
    }
}
