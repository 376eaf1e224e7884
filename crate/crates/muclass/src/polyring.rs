//! Exact sparse multivariate polynomials over ℚ.
//!
//! Everything in this module is exact: coefficients are arbitrary-precision
//! rationals, terms live in a BTreeMap keyed by graded-lex monomial order, so
//! iteration (and serialization) is canonical. No floating point anywhere.
//!
//! Besides ring arithmetic the module carries the Weyl-group machinery the
//! pushforward needs: variable actions of signed permutations,
//! antisymmetrization over a Weyl group (with a fast path for powers of a
//! linear form), and exact division by linear forms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::rootdata::{Family, RootDatum, WeylElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },
    #[error("variable index {index} out of range for dimension {dim}")]
    BadIndex { index: usize, dim: usize },
    #[error("divisor is not a nonzero homogeneous linear form")]
    NotLinear,
    #[error("not divisible: remainder has leading term {0}")]
    NotDivisible(String),
    #[error("evaluation point has length {got}, expected {want}")]
    PointLength { got: usize, want: usize },
}

/// Exponent vector with graded-lex ordering (total degree first, then lex).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over ℚ in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    dim: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl RatPoly {
    pub fn zero(dim: usize) -> RatPoly {
        RatPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: BigRational) -> RatPoly {
        let mut p = RatPoly::zero(dim);
        p.add_term(Monomial(vec![0; dim]), c);
        p
    }

    pub fn one(dim: usize) -> RatPoly {
        RatPoly::constant(dim, BigRational::one())
    }

    /// The variable x_i (zero-based).
    pub fn var(dim: usize, i: usize) -> RatPoly {
        assert!(i < dim, "variable index out of range");
        let mut exp = vec![0u32; dim];
        exp[i] = 1;
        let mut p = RatPoly::zero(dim);
        p.add_term(Monomial(exp), BigRational::one());
        p
    }

    /// The linear form sum_i coeffs[i] * x_i.
    pub fn linear_form(coeffs: &[BigRational]) -> RatPoly {
        let dim = coeffs.len();
        let mut p = RatPoly::zero(dim);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0u32; dim];
            exp[i] = 1;
            p.add_term(Monomial(exp), c.clone());
        }
        p
    }

    pub fn linear_from_ints(coeffs: &[i64]) -> RatPoly {
        let rat: Vec<BigRational> = coeffs
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        RatPoly::linear_form(&rat)
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> RatPoly
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = RatPoly::zero(dim);
        for (exp, c) in terms {
            assert_eq!(exp.len(), dim);
            p.add_term(Monomial(exp), c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[u32]) -> BigRational {
        self.terms
            .get(&Monomial(exp.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Some(d) when every term has total degree d (zero polynomial -> None).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| m.total_degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    fn add_term(&mut self, mono: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &RatPoly) -> Result<(), PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::Dimension {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &RatPoly) -> Result<RatPoly, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &RatPoly) -> Result<RatPoly, PolyError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &RatPoly) -> Result<RatPoly, PolyError> {
        self.check_dim(other)?;
        let mut out = RatPoly::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exp: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(exp), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> RatPoly {
        let mut out = RatPoly::zero(self.dim);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero(self.dim);
        }
        let mut out = RatPoly::zero(self.dim);
        for (m, k) in &self.terms {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    /// Power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> RatPoly {
        let mut base = self.clone();
        let mut acc = RatPoly::one(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same dim");
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base).expect("same dim");
            }
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.dim {
            return Err(PolyError::PointLength {
                got: point.len(),
                want: self.dim,
            });
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to x_i.
    pub fn partial(&self, i: usize) -> Result<RatPoly, PolyError> {
        if i >= self.dim {
            return Err(PolyError::BadIndex {
                index: i,
                dim: self.dim,
            });
        }
        let mut out = RatPoly::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[i] = e - 1;
            out.add_term(
                Monomial(exp),
                c * BigRational::from_integer(BigInt::from(e)),
            );
        }
        Ok(out)
    }

    /// Substitute x_{d-1} := -(x_0 + ... + x_{d-2}) and drop the last
    /// variable. This is the canonical reduction modulo the traceless ideal
    /// for family A computations.
    pub fn reduce_traceless(&self) -> RatPoly {
        assert!(self.dim >= 1);
        let d = self.dim;
        let minus_sum = RatPoly::linear_from_ints(&vec![-1i64; d - 1]);
        let mut out = RatPoly::zero(d - 1);
        for (m, c) in &self.terms {
            let prefix = Monomial(m.0[..d - 1].to_vec());
            let e = m.0[d - 1];
            let mut contrib = RatPoly::zero(d - 1);
            contrib.add_term(prefix, c.clone());
            if e > 0 {
                contrib = contrib.try_mul(&minus_sum.pow(e)).expect("same dim");
            }
            out = out.try_add(&contrib).expect("same dim");
        }
        out
    }

    /// JSON-ready term list: graded-lex sorted (exp, "p/q") pairs.
    pub fn term_strings(&self) -> Vec<(Vec<u32>, String)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.0.clone(), c.to_string()))
            .collect()
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Apply a Weyl element to a polynomial: (w·p)(x) = p(w⁻¹ x).
///
/// On monomials the signed permutation sends the exponent of x_i to the slot
/// perm(i) and multiplies by sign_i^{e_i}; this is a ring homomorphism.
pub fn weyl_apply(w: &WeylElement, p: &RatPoly) -> RatPoly {
    assert_eq!(w.dim(), p.dim(), "weyl element/polynomial dimension mismatch");
    let mut out = RatPoly::zero(p.dim());
    for (m, c) in &p.terms {
        let mut exp = vec![0u32; p.dim()];
        let mut negate = false;
        for (i, &e) in m.0.iter().enumerate() {
            exp[w.image(i)] = e;
            if w.coordinate_sign(i) < 0 && e % 2 == 1 {
                negate = !negate;
            }
        }
        let coeff = if negate { -c.clone() } else { c.clone() };
        out.terms.insert(Monomial(exp), coeff);
    }
    out
}

fn signed(sign: i8, p: RatPoly) -> RatPoly {
    if sign < 0 {
        p.neg()
    } else {
        p
    }
}

/// Antisymmetrization over the full Weyl group: Σ_w sign(w) (w·p).
///
/// The result alternates (w·q = sign(w)·q) and is therefore divisible by
/// every positive root. Exact arithmetic makes the parallel reduction
/// schedule-independent.
pub fn antisymmetrize(datum: &RootDatum, p: &RatPoly) -> RatPoly {
    let elements: Vec<WeylElement> = crate::rootdata::weyl_elements(datum).collect();
    let chunk = (elements.len() / (4 * rayon::current_num_threads().max(1))).max(16);
    elements
        .par_chunks(chunk)
        .map(|ws| {
            let mut acc = RatPoly::zero(p.dim());
            for w in ws {
                acc = acc
                    .try_add(&signed(w.sign(), weyl_apply(w, p)))
                    .expect("same dim");
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(RatPoly::zero(p.dim()), |a, b| {
            a.try_add(&b).expect("same dim")
        })
}

/// Expand (Σ c_i x_i)^power by the multinomial theorem.
pub fn expand_linear_power(coeffs: &[BigRational], power: u32) -> RatPoly {
    let dim = coeffs.len();
    let support: Vec<usize> = (0..dim).filter(|&i| !coeffs[i].is_zero()).collect();
    if support.is_empty() {
        return if power == 0 {
            RatPoly::one(dim)
        } else {
            RatPoly::zero(dim)
        };
    }
    // factorials up to `power`, and coefficient powers on the support
    let mut fact = vec![BigInt::one(); power as usize + 1];
    for i in 1..=power as usize {
        fact[i] = &fact[i - 1] * BigInt::from(i);
    }
    let mut cpow: Vec<Vec<BigRational>> = Vec::with_capacity(support.len());
    for &i in &support {
        let mut row = Vec::with_capacity(power as usize + 1);
        row.push(BigRational::one());
        for e in 1..=power as usize {
            let prev = row[e - 1].clone();
            row.push(prev * &coeffs[i]);
        }
        cpow.push(row);
    }

    let mut out = RatPoly::zero(dim);
    let mut exps = vec![0u32; support.len()];
    // enumerate compositions of `power` over the support
    fn rec(
        slot: usize,
        remaining: u32,
        support: &[usize],
        exps: &mut Vec<u32>,
        dim: usize,
        power: u32,
        fact: &[BigInt],
        cpow: &[Vec<BigRational>],
        out: &mut RatPoly,
    ) {
        if slot == support.len() - 1 {
            exps[slot] = remaining;
            let mut denom = BigInt::one();
            for &e in exps.iter() {
                denom *= &fact[e as usize];
            }
            let mut coeff = BigRational::from_integer(fact[power as usize].clone())
                / BigRational::from_integer(denom);
            for (s, &e) in exps.iter().enumerate() {
                coeff *= &cpow[s][e as usize];
            }
            let mut full = vec![0u32; dim];
            for (s, &e) in exps.iter().enumerate() {
                full[support[s]] = e;
            }
            out.add_term(Monomial(full), coeff);
            return;
        }
        for e in 0..=remaining {
            exps[slot] = e;
            rec(
                slot + 1,
                remaining - e,
                support,
                exps,
                dim,
                power,
                fact,
                cpow,
                out,
            );
        }
    }
    rec(0, power, &support, &mut exps, dim, power, &fact, &cpow, &mut out);
    out
}

/// Fast path for the pushforward numerator:
/// Σ_w sign(w) · ⟨wξ, x⟩^power · (w·carrier).
///
/// Equal to `antisymmetrize(datum, ℓ_ξ^power · carrier)` but expands each
/// power of a linear form directly per Weyl element, which keeps the
/// intermediate term count at its minimum.
pub fn antisymmetrize_linear_power(
    datum: &RootDatum,
    xi: &[BigRational],
    power: u32,
    carrier: &RatPoly,
) -> RatPoly {
    assert_eq!(xi.len(), datum.ambient_dim);
    assert_eq!(carrier.dim(), datum.ambient_dim);
    let dim = datum.ambient_dim;
    let carrier_is_one = carrier.num_terms() == 1 && {
        let (m, c) = carrier.terms().next().unwrap();
        m.is_constant() && c.is_one()
    };
    let elements: Vec<WeylElement> = crate::rootdata::weyl_elements(datum).collect();
    let chunk = (elements.len() / (4 * rayon::current_num_threads().max(1))).max(8);
    elements
        .par_chunks(chunk)
        .map(|ws| {
            let mut acc = RatPoly::zero(dim);
            for w in ws {
                let eta = w.apply_rational(xi);
                let mut piece = expand_linear_power(&eta, power);
                if !carrier_is_one {
                    piece = piece
                        .try_mul(&weyl_apply(w, carrier))
                        .expect("same dim");
                }
                acc = acc.try_add(&signed(w.sign(), piece)).expect("same dim");
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(RatPoly::zero(dim), |a, b| a.try_add(&b).expect("same dim"))
}

/// Exact division by a nonzero homogeneous linear form. Errors if any
/// remainder survives; on antisymmetrized numerators it never should.
pub fn divide_exact_linear(p: &RatPoly, ell: &RatPoly) -> Result<RatPoly, PolyError> {
    p.check_dim(ell)?;
    if ell.is_zero() || ell.homogeneous_degree() != Some(1) {
        return Err(PolyError::NotLinear);
    }
    // leading (graded-lex max) variable of the divisor
    let (lead_mono, lead_coeff) = ell.terms.iter().next_back().expect("nonzero");
    let pivot = lead_mono
        .0
        .iter()
        .position(|&e| e == 1)
        .expect("linear form");
    let lead_coeff = lead_coeff.clone();

    let mut rem = p.clone();
    let mut quot = RatPoly::zero(p.dim);
    while let Some((m, c)) = rem.terms.iter().next_back() {
        if m.0[pivot] == 0 {
            return Err(PolyError::NotDivisible(format!("{}", rem)));
        }
        let mut qexp = m.0.clone();
        qexp[pivot] -= 1;
        let qc = c / &lead_coeff;
        // rem -= q_term * ell
        for (em, ec) in &ell.terms {
            let exp: Vec<u32> = qexp.iter().zip(&em.0).map(|(a, b)| a + b).collect();
            rem.add_term(Monomial(exp), -(&qc * ec));
        }
        quot.add_term(Monomial(qexp), qc);
    }
    Ok(quot)
}

/// Zero-test representative: for family A reduce modulo the traceless ideal
/// (the Weyl-invariant content lives on the hyperplane Σx_i = 0), otherwise
/// the polynomial itself.
pub fn canonical_form(datum: &RootDatum, p: &RatPoly) -> RatPoly {
    match datum.family {
        Family::A => p.reduce_traceless(),
        _ => p.clone(),
    }
}
