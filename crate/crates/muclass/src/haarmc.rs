//! Haar-measure Monte Carlo: the numerical oracle for the symbolic engine.
//!
//! For an orbit through ξ and a torus direction X the integrals
//! ∫_G ⟨X, Ad_g ξ⟩^k dg (normalized Haar, mass 1) determine the invariant
//! polynomials behind μ_k up to a k-independent factor and the binomial
//! C(n+k, k). `crosscheck_ratio` estimates the integrals by Monte Carlo and
//! verifies both facts: the ratio μ_k(X)/Î_k is constant in X, and across k
//! the ratios follow s^{k−j}·C(n+k,k)/C(n+j,j) for one global sign s that is
//! fitted, never assumed.
//!
//! Sampling is deterministic: a counter-based generator seeded per shard
//! from (seed, shard index), with a fixed-order reduction, so estimates are
//! bit-identical regardless of the rayon schedule.
//!
//! Matrix models exist for SU(m) (family A) and SO(m) (families B and D);
//! the compact symplectic groups of family C have no model here.

use num::complex::Complex64;
use num::{BigRational, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::muclasses::{mu_class, MuError, OrbitSpec};
use crate::rootdata::{Family, RootDatum};

#[derive(Debug, Error)]
pub enum HaarError {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("no matrix model for family C (compact symplectic groups are not sampled)")]
    UnsupportedGroup,
    #[error("numeric integrity: imaginary residue {residue:e} exceeds tolerance")]
    NumericResidue { residue: f64 },
    #[error("degenerate test point set: every test direction was skipped")]
    DegenerateTestPoints,
    #[error(transparent)]
    Mu(#[from] MuError),
}

/// Compact matrix group carrying the orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixGroup {
    Su(usize),
    So(usize),
}

impl MatrixGroup {
    pub fn label(self) -> String {
        match self {
            MatrixGroup::Su(m) => format!("SU({m})"),
            MatrixGroup::So(m) => format!("SO({m})"),
        }
    }

    pub fn matrix_dim(self) -> usize {
        match self {
            MatrixGroup::Su(m) | MatrixGroup::So(m) => m,
        }
    }

    fn is_real(self) -> bool {
        matches!(self, MatrixGroup::So(_))
    }

    /// Gram constant of the torus embedding under -tr: 1 for SU, 2 for SO.
    fn gram(self) -> f64 {
        match self {
            MatrixGroup::Su(_) => 1.0,
            MatrixGroup::So(_) => 2.0,
        }
    }
}

/// Matrix model matched to a root datum: A_{m-1} ↔ SU(m), B_r ↔ SO(2r+1),
/// D_r ↔ SO(2r).
pub fn matrix_group(datum: &RootDatum) -> Result<MatrixGroup, HaarError> {
    match datum.family {
        Family::A => Ok(MatrixGroup::Su(datum.rank + 1)),
        Family::B => Ok(MatrixGroup::So(2 * datum.rank + 1)),
        Family::D => Ok(MatrixGroup::So(2 * datum.rank)),
        Family::C => Err(HaarError::UnsupportedGroup),
    }
}

/// Dense square complex matrix, row-major. Dimensions stay at 8 or below,
/// so nothing here is tuned.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    a: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> CMat {
        CMat {
            n,
            a: vec![Complex64::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> CMat {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Conjugation g · self · g†, the adjoint action for unitary g.
    pub fn conjugate_by(&self, g: &CMat) -> CMat {
        g.mul(self).mul(&g.adjoint())
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut m = self.a.clone();
        let mut det = Complex64::ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| {
                    m[r * n + col]
                        .norm_sqr()
                        .partial_cmp(&m[s * n + col].norm_sqr())
                        .unwrap()
                })
                .unwrap();
            if m[pivot * n + col].norm_sqr() == 0.0 {
                return Complex64::ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    m.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = m[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = m[r * n + col] / p;
                for j in col..n {
                    let v = m[col * n + j];
                    m[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    /// Largest |(g†g − I)_{ij}|, the unitarity defect.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((gram.get(i, j) - expected).norm());
            }
        }
        worst
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in &mut self.a {
            *v *= c;
        }
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational fits in f64")
}

/// Embed torus coordinates into the Lie algebra: diag(i·x_1, ..., i·x_m) for
/// SU(m), 2x2 rotation-generator blocks for SO(m) (odd m gets a zero slot).
pub fn embed_torus(group: MatrixGroup, coords: &[BigRational]) -> CMat {
    match group {
        MatrixGroup::Su(m) => {
            assert_eq!(coords.len(), m, "SU({m}) needs {m} torus coordinates");
            let mut out = CMat::zeros(m);
            for (j, x) in coords.iter().enumerate() {
                out.set(j, j, Complex64::new(0.0, to_f64(x)));
            }
            out
        }
        MatrixGroup::So(m) => {
            let r = m / 2;
            assert_eq!(coords.len(), r, "SO({m}) needs {r} torus coordinates");
            let mut out = CMat::zeros(m);
            for (j, x) in coords.iter().enumerate() {
                let v = to_f64(x);
                out.set(2 * j, 2 * j + 1, Complex64::new(-v, 0.0));
                out.set(2 * j + 1, 2 * j, Complex64::new(v, 0.0));
            }
            out
        }
    }
}

/// Embed a coadjoint point: the metric dual of `embed_torus` under -tr,
/// which divides by the Gram constant of the embedding. Pairing the result
/// against `embed_torus(X)` reproduces the coordinate pairing ⟨X, ξ⟩.
pub fn embed_torus_dual(group: MatrixGroup, coords: &[BigRational]) -> CMat {
    let mut m = embed_torus(group, coords);
    m.scale(Complex64::new(1.0 / group.gram(), 0.0));
    m
}

/// The invariant pairing -tr(X·Y). The imaginary residue must stay within
/// floating-point noise; anything larger is a numeric-integrity failure.
pub fn pairing(x: &CMat, y: &CMat) -> Result<f64, HaarError> {
    let t = -x.mul(y).trace();
    let tol = 1e-10 * t.re.abs().max(1.0);
    if t.im.abs() > tol {
        return Err(HaarError::NumericResidue { residue: t.im.abs() });
    }
    Ok(t.re)
}

fn sample_ginibre(group: MatrixGroup, rng: &mut ChaCha8Rng) -> CMat {
    let m = group.matrix_dim();
    let mut out = CMat::zeros(m);
    for i in 0..m {
        for j in 0..m {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if group.is_real() {
                0.0
            } else {
                rng.sample(StandardNormal)
            };
            out.set(i, j, Complex64::new(re, im));
        }
    }
    out
}

/// Modified Gram-Schmidt with a second pass; the positive-diagonal R makes
/// the Q factor Haar-distributed for Gaussian input. Returns None on a
/// numerically deficient input (resampled by the caller).
fn orthonormalize(a: &CMat) -> Option<CMat> {
    let n = a.dim();
    let mut q = a.clone();
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|i| q.get(i, j)).collect();
        for _pass in 0..2 {
            for prev in 0..j {
                let mut r = Complex64::ZERO;
                for i in 0..n {
                    r += q.get(i, prev).conj() * v[i];
                }
                for i in 0..n {
                    v[i] -= r * q.get(i, prev);
                }
            }
        }
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return None;
        }
        for i in 0..n {
            q.set(i, j, v[i] / norm);
        }
    }
    Some(q)
}

/// Draw one Haar-distributed element with determinant corrected to +1.
pub fn sample_haar(group: MatrixGroup, rng: &mut ChaCha8Rng) -> CMat {
    let mut q = loop {
        let g = sample_ginibre(group, rng);
        if let Some(q) = orthonormalize(&g) {
            break q;
        }
    };
    let m = group.matrix_dim();
    match group {
        MatrixGroup::Su(_) => {
            // divide out an m-th root of the determinant phase
            let theta = q.det().arg();
            q.scale(Complex64::from_polar(1.0, -theta / m as f64));
        }
        MatrixGroup::So(_) => {
            if q.det().re < 0.0 {
                for i in 0..m {
                    let v = -q.get(i, m - 1);
                    q.set(i, m - 1, v);
                }
            }
        }
    }
    debug_assert!(q.unitarity_defect() < 1e-12);
    debug_assert!((q.det() - Complex64::ONE).norm() < 1e-10);
    q
}

/// Monte Carlo mean and standard error for one integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

const SHARD: usize = 4096;

fn shard_sizes(n_samples: usize) -> Vec<usize> {
    let shards = n_samples.div_ceil(SHARD);
    (0..shards)
        .map(|i| SHARD.min(n_samples - i * SHARD))
        .collect()
}

/// Estimate E[h^k] for every k in `k_list` over one Haar sample stream,
/// where h(g) = ⟨X, Ad_g ξ⟩ in the canonical pairing.
pub fn estimate_powers(
    group: MatrixGroup,
    x_coords: &[BigRational],
    xi_coords: &[BigRational],
    k_list: &[usize],
    n_samples: usize,
    seed: u64,
    stream_base: u64,
) -> Result<Vec<McEstimate>, HaarError> {
    if n_samples < 1_000 {
        return Err(HaarError::Argument(format!(
            "n_samples = {n_samples} is below the minimum 1000"
        )));
    }
    let x_mat = embed_torus(group, x_coords);
    let xi_dual = embed_torus_dual(group, xi_coords);
    let sizes = shard_sizes(n_samples);
    let nk = k_list.len();

    let partials: Result<Vec<(Vec<f64>, Vec<f64>)>, HaarError> = sizes
        .par_iter()
        .enumerate()
        .map(|(shard_index, &count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_base + shard_index as u64);
            let mut sums = vec![0.0f64; nk];
            let mut sumsqs = vec![0.0f64; nk];
            for _ in 0..count {
                let g = sample_haar(group, &mut rng);
                let ad_xi = xi_dual.conjugate_by(&g);
                let h = pairing(&x_mat, &ad_xi)?;
                for (slot, &k) in k_list.iter().enumerate() {
                    let v = h.powi(k as i32);
                    sums[slot] += v;
                    sumsqs[slot] += v * v;
                }
            }
            Ok((sums, sumsqs))
        })
        .collect();
    let partials = partials?;

    // fixed-order reduction keeps results bit-identical across schedules
    let mut sums = vec![0.0f64; nk];
    let mut sumsqs = vec![0.0f64; nk];
    for (s, s2) in &partials {
        for i in 0..nk {
            sums[i] += s[i];
            sumsqs[i] += s2[i];
        }
    }
    let nf = n_samples as f64;
    Ok((0..nk)
        .map(|i| {
            let mean = sums[i] / nf;
            let var = ((sumsqs[i] - nf * mean * mean) / (nf - 1.0)).max(0.0);
            McEstimate {
                mean,
                stderr: (var / nf).sqrt(),
                n_samples,
                seed,
            }
        })
        .collect())
}

/// Estimate the single Haar integral ∫ ⟨X, Ad_g ξ⟩^k dg for an orbit.
pub fn estimate_i_k(
    spec: &OrbitSpec,
    x_coords: &[BigRational],
    k: usize,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate, HaarError> {
    let group = matrix_group(&spec.datum)?;
    validate_direction(&spec.datum, x_coords)?;
    Ok(estimate_powers(group, x_coords, &spec.xi, &[k], n_samples, seed, 0)?[0])
}

/// Estimate E[f(g)] for an arbitrary statistic, same determinism contract.
pub fn estimate_statistic<F>(
    group: MatrixGroup,
    f: F,
    n_samples: usize,
    seed: u64,
) -> McEstimate
where
    F: Fn(&CMat) -> f64 + Sync,
{
    let sizes = shard_sizes(n_samples);
    let partials: Vec<(f64, f64)> = sizes
        .par_iter()
        .enumerate()
        .map(|(shard_index, &count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard_index as u64);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..count {
                let v = f(&sample_haar(group, &mut rng));
                sum += v;
                sumsq += v * v;
            }
            (sum, sumsq)
        })
        .collect();
    let (mut sum, mut sumsq) = (0.0, 0.0);
    for (s, s2) in partials {
        sum += s;
        sumsq += s2;
    }
    let nf = n_samples as f64;
    let mean = sum / nf;
    let var = ((sumsq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    McEstimate {
        mean,
        stderr: (var / nf).sqrt(),
        n_samples,
        seed,
    }
}

fn validate_direction(datum: &RootDatum, x: &[BigRational]) -> Result<(), HaarError> {
    if x.len() != datum.ambient_dim {
        return Err(HaarError::Argument(format!(
            "test direction has length {}, expected {}",
            x.len(),
            datum.ambient_dim
        )));
    }
    if datum.family == Family::A {
        let sum: BigRational = x.iter().sum();
        if !sum.is_zero() {
            return Err(HaarError::Argument(
                "family A test directions must be traceless".into(),
            ));
        }
    }
    Ok(())
}

/// Outcome for a single k in the cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KStatus {
    /// Ratios were formed and checked.
    Ok,
    /// μ_k is the zero class; the Monte Carlo side must vanish too.
    BothSidesVanish,
    /// μ_k is nonzero but no test direction separated the integral from 0.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct KReport {
    pub k: usize,
    pub mu_is_zero: bool,
    /// One estimate per test direction.
    pub estimates: Vec<McEstimate>,
    /// Exact value of μ_k at each test direction.
    pub mu_values: Vec<f64>,
    /// ρ_k(X) and its propagated sigma per usable direction (None = skipped).
    pub ratios: Vec<Option<(f64, f64)>>,
    pub status: KStatus,
    pub rho_mean: Option<f64>,
    pub rho_sigma: Option<f64>,
    /// Pairwise agreement of ρ_k across directions within 3σ.
    pub constancy_pass: bool,
    /// For BothSidesVanish: every estimate within 3σ of zero.
    pub vanish_consistent: bool,
}

/// One cross-k ratio test: observed ρ_k/ρ_j against s^{k−j}·C(n+k,k)/C(n+j,j).
#[derive(Debug, Clone)]
pub struct PairCheck {
    pub k: usize,
    pub j: usize,
    pub observed: f64,
    pub sigma: f64,
    pub expected_plus: f64,
    pub expected_minus: f64,
    pub pass_plus: bool,
    pub pass_minus: bool,
}

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub group: String,
    pub n: usize,
    pub k_list: Vec<usize>,
    pub n_samples: usize,
    pub seed: u64,
    pub x_list: Vec<Vec<BigRational>>,
    pub per_k: Vec<KReport>,
    pub pairs: Vec<PairCheck>,
    /// +1 or -1 when some pair with odd k-j discriminates the sign; None
    /// when all pairs are sign-blind (even differences only).
    pub fitted_sign: Option<i8>,
    pub pass: bool,
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (k - i) as f64;
    }
    acc
}

/// Cross-validate the symbolic μ_k against Haar Monte Carlo.
///
/// For each k: estimate Î_k(X) on every test direction, form
/// ρ_k(X) = μ_k(X)/Î_k(X) on directions where the integral is resolved
/// (|Î| > 5·stderr), and check ρ_k is constant over X within 3σ. Across k,
/// check ρ_k/ρ_j = s^{k−j}·C(n+k,k)/C(n+j,j) within 3σ for a single fitted
/// sign s. Zero classes are checked for two-sided vanishing instead.
pub fn crosscheck_ratio(
    spec: &OrbitSpec,
    k_list: &[usize],
    x_list: &[Vec<BigRational>],
    n_samples: usize,
    seed: u64,
) -> Result<CrosscheckReport, HaarError> {
    let group = matrix_group(&spec.datum)?;
    if x_list.is_empty() {
        return Err(HaarError::Argument("empty test direction list".into()));
    }
    for x in x_list {
        validate_direction(&spec.datum, x)?;
    }
    let mut ks: Vec<usize> = k_list.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() || ks[0] < 1 {
        return Err(HaarError::Argument("k list must contain k >= 1 only".into()));
    }

    // symbolic side
    let mus: Vec<crate::muclasses::MuClass> = ks
        .iter()
        .map(|&k| mu_class(spec, k))
        .collect::<Result<_, _>>()?;

    // numeric side: one stream per test direction, shared across k
    let mut estimates_per_x: Vec<Vec<McEstimate>> = Vec::with_capacity(x_list.len());
    for (x_index, x) in x_list.iter().enumerate() {
        let stream_base = (x_index as u64 + 1) << 32;
        estimates_per_x.push(estimate_powers(
            group,
            x,
            &spec.xi,
            &ks,
            n_samples,
            seed,
            stream_base,
        )?);
    }

    let mut per_k = Vec::with_capacity(ks.len());
    for (slot, &k) in ks.iter().enumerate() {
        let mu = &mus[slot];
        let estimates: Vec<McEstimate> =
            (0..x_list.len()).map(|xi| estimates_per_x[xi][slot]).collect();
        let mu_values: Vec<f64> = x_list
            .iter()
            .map(|x| to_f64(&mu.poly.eval(x).expect("matching dim")))
            .collect();

        if mu.is_zero {
            let vanish_consistent = estimates
                .iter()
                .all(|e| e.mean.abs() <= 3.0 * e.stderr.max(f64::MIN_POSITIVE));
            per_k.push(KReport {
                k,
                mu_is_zero: true,
                estimates,
                mu_values,
                ratios: vec![None; x_list.len()],
                status: KStatus::BothSidesVanish,
                rho_mean: None,
                rho_sigma: None,
                constancy_pass: true,
                vanish_consistent,
            });
            continue;
        }

        let ratios: Vec<Option<(f64, f64)>> = estimates
            .iter()
            .zip(&mu_values)
            .map(|(e, &mu_x)| {
                if e.mean.abs() > 5.0 * e.stderr {
                    let rho = mu_x / e.mean;
                    let sigma = rho.abs() * (e.stderr / e.mean.abs());
                    Some((rho, sigma))
                } else {
                    None
                }
            })
            .collect();
        let usable: Vec<(f64, f64)> = ratios.iter().flatten().copied().collect();
        if usable.is_empty() {
            per_k.push(KReport {
                k,
                mu_is_zero: false,
                estimates,
                mu_values,
                ratios,
                status: KStatus::Degenerate,
                rho_mean: None,
                rho_sigma: None,
                constancy_pass: false,
                vanish_consistent: false,
            });
            continue;
        }
        let mut constancy_pass = true;
        for a in 0..usable.len() {
            for b in a + 1..usable.len() {
                let (ra, sa) = usable[a];
                let (rb, sb) = usable[b];
                if (ra - rb).abs() > 3.0 * (sa * sa + sb * sb).sqrt() {
                    constancy_pass = false;
                }
            }
        }
        let wsum: f64 = usable.iter().map(|(_, s)| 1.0 / (s * s).max(1e-300)).sum();
        let rho_mean = usable
            .iter()
            .map(|(r, s)| r / (s * s).max(1e-300))
            .sum::<f64>()
            / wsum;
        let rho_sigma = (1.0 / wsum).sqrt();
        per_k.push(KReport {
            k,
            mu_is_zero: false,
            estimates,
            mu_values,
            ratios,
            status: KStatus::Ok,
            rho_mean: Some(rho_mean),
            rho_sigma: Some(rho_sigma),
            constancy_pass,
            vanish_consistent: true,
        });
    }

    let any_nonzero_requested = per_k.iter().any(|r| !r.mu_is_zero);
    let any_usable = per_k.iter().any(|r| r.status == KStatus::Ok);
    if any_nonzero_requested && !any_usable {
        return Err(HaarError::DegenerateTestPoints);
    }

    // cross-k binomial ratios with the global fitted sign
    let ok_ks: Vec<&KReport> = per_k.iter().filter(|r| r.status == KStatus::Ok).collect();
    let mut pairs = Vec::new();
    for a in 0..ok_ks.len() {
        for b in 0..a {
            let (hi, lo) = (ok_ks[a], ok_ks[b]);
            let (rk, sk) = (hi.rho_mean.unwrap(), hi.rho_sigma.unwrap());
            let (rj, sj) = (lo.rho_mean.unwrap(), lo.rho_sigma.unwrap());
            let observed = rk / rj;
            let sigma =
                observed.abs() * ((sk / rk.abs()).powi(2) + (sj / rj.abs()).powi(2)).sqrt();
            let magnitude =
                binomial(spec.n + hi.k, hi.k) / binomial(spec.n + lo.k, lo.k);
            let parity = (hi.k - lo.k) % 2;
            let expected_plus = magnitude;
            let expected_minus = if parity == 0 { magnitude } else { -magnitude };
            pairs.push(PairCheck {
                k: hi.k,
                j: lo.k,
                observed,
                sigma,
                expected_plus,
                expected_minus,
                pass_plus: (observed - expected_plus).abs() <= 3.0 * sigma,
                pass_minus: (observed - expected_minus).abs() <= 3.0 * sigma,
            });
        }
    }

    let plus_all = pairs.iter().all(|p| p.pass_plus);
    let minus_all = pairs.iter().all(|p| p.pass_minus);
    let sign_sensitive = pairs.iter().any(|p| p.expected_plus != p.expected_minus);
    let (fitted_sign, pairs_pass) = if pairs.is_empty() || !sign_sensitive {
        (None, plus_all)
    } else if plus_all && !minus_all {
        (Some(1i8), true)
    } else if minus_all && !plus_all {
        (Some(-1i8), true)
    } else if plus_all && minus_all {
        (None, true)
    } else {
        (None, false)
    };

    let per_k_pass = per_k.iter().all(|r| match r.status {
        KStatus::Ok => r.constancy_pass,
        KStatus::BothSidesVanish => r.vanish_consistent,
        KStatus::Degenerate => false,
    });

    Ok(CrosscheckReport {
        group: group.label(),
        n: spec.n,
        k_list: ks,
        n_samples,
        seed,
        x_list: x_list.to_vec(),
        per_k,
        pairs,
        fitted_sign,
        pass: per_k_pass && pairs_pass,
    })
}
