//! Dense symmetric eigensolvers and spectral reports for relation graphs.
//!
//! Everything numeric is generic over `num_traits::Float`; the crate root
//! exports `f64` and `f32` aliases.

use std::fmt::Debug;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::SchemeGraph;

#[inline]
pub(crate) fn lit<T: Float>(x: f64) -> T {
    T::from(x).expect("representable constant")
}

/// Row-major dense symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSymMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Float> DenseSymMatrix<T> {
    /// Checks exact symmetry of `entries`.
    pub fn new(n: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: n * n,
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(DenseSymMatrix { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        DenseSymMatrix {
            n,
            entries: vec![T::zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn row_sums(&self) -> Vec<T> {
        self.entries
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.iter().fold(T::zero(), |a, &b| a + b))
            .collect()
    }

    fn frobenius(&self) -> T {
        self.entries.iter().fold(T::zero(), |a, &x| a + x * x).sqrt()
    }
}

/// 0/1 adjacency matrix of a relation graph.
pub fn adjacency_matrix<T: Float>(graph: &SchemeGraph) -> DenseSymMatrix<T> {
    let n = graph.n();
    let mut m = DenseSymMatrix::zeros(n);
    for (u, v) in graph.edges() {
        let (u, v) = (u as usize, v as usize);
        m.entries[u * n + v] = T::one();
        m.entries[v * n + u] = T::one();
    }
    m
}

/// Which dense solver produced a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Jacobi,
    Tridiagonal,
}

/// Eigenvalues sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    /// Off-diagonal Frobenius norm relative to the initial Frobenius norm
    /// at termination (Jacobi), or the largest remaining subdiagonal entry
    /// relative to the matrix norm (tridiagonal QL).
    pub residual: T,
    pub method: EigenMethod,
    /// Jacobi sweeps, or total QL iterations.
    pub iterations: usize,
}

impl<T: Float> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn largest(&self) -> Option<T> {
        self.eigenvalues.first().copied()
    }

    pub fn sum(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |a, &x| a + x)
    }

    pub fn sum_squares(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |a, &x| a + x * x)
    }

    /// Distinct eigenvalues with multiplicities; consecutive values within
    /// `tol` of the group's first member are merged.
    pub fn grouped(&self, tol: T) -> Vec<(T, usize)> {
        let mut out: Vec<(T, usize)> = Vec::new();
        for &x in &self.eigenvalues {
            match out.last_mut() {
                Some((head, count)) if (*head - x).abs() <= tol => *count += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    fn from_unsorted(mut eigenvalues: Vec<T>, residual: T, method: EigenMethod, iterations: usize) -> Self {
        eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        Spectrum {
            eigenvalues,
            residual,
            method,
            iterations,
        }
    }
}

/// Stopping rule for cyclic Jacobi.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiOptions<T> {
    /// Converged once off(A) < tolerance * ||A_0||_F (or < tolerance when
    /// A_0 = 0).
    pub tolerance: T,
    pub max_sweeps: usize,
}

impl<T: Float> Default for JacobiOptions<T> {
    fn default() -> Self {
        // 1e-12 is below the rounding floor of f32
        let tolerance = lit::<T>(1e-12).max(T::epsilon() * lit(10.0));
        JacobiOptions {
            tolerance,
            max_sweeps: 100,
        }
    }
}

/// Full spectrum by cyclic Jacobi rotations with the default stopping rule.
pub fn sym_eigenvalues<T: Float>(m: &DenseSymMatrix<T>) -> Result<Spectrum<T>> {
    sym_eigenvalues_jacobi(m, JacobiOptions::default())
}

/// Cyclic-by-row Jacobi. Each rotation zeroes one off-diagonal entry and
/// lowers off(A)^2 by twice its square.
pub fn sym_eigenvalues_jacobi<T: Float>(m: &DenseSymMatrix<T>, opts: JacobiOptions<T>) -> Result<Spectrum<T>> {
    let n = m.n;
    let mut a = m.entries.clone();
    let norm0 = m.frobenius();
    let scale = if norm0 > T::zero() { norm0 } else { T::one() };
    let two = lit::<T>(2.0);

    let off_norm = |a: &[T]| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    for sweep in 0..=opts.max_sweeps {
        let residual = off_norm(&a) / scale;
        if residual < opts.tolerance {
            let diag = (0..n).map(|i| a[i * n + i]).collect();
            return Ok(Spectrum::from_unsorted(diag, residual, EigenMethod::Jacobi, sweep));
        }
        if sweep == opts.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps: sweep,
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (two * apq);
                let sign = if theta < T::zero() { -T::one() } else { T::one() };
                let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                a[p * n + p] = a[p * n + p] - t * apq;
                a[q * n + q] = a[q * n + q] + t * apq;
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    a[k * n + p] = np;
                    a[k * n + q] = nq;
                    a[p * n + k] = np;
                    a[q * n + k] = nq;
                }
            }
        }
    }
    unreachable!("loop returns on its last iteration")
}

/// Full spectrum by Householder reduction to tridiagonal form followed by
/// implicit QL with Wilkinson-type shifts.
pub fn sym_eigenvalues_tridiagonal<T: Float>(m: &DenseSymMatrix<T>) -> Result<Spectrum<T>> {
    let n = m.n;
    if n == 0 {
        return Ok(Spectrum::from_unsorted(
            Vec::new(),
            T::zero(),
            EigenMethod::Tridiagonal,
            0,
        ));
    }
    let norm0 = m.frobenius();
    let (mut d, mut e) = householder_tridiagonal(n, m.entries.clone());
    let iterations = implicit_ql(&mut d, &mut e)?;
    let scale = if norm0 > T::zero() { norm0 } else { T::one() };
    let residual = e.iter().fold(T::zero(), |a, &x| a.max(x.abs())) / scale;
    Ok(Spectrum::from_unsorted(
        d,
        residual,
        EigenMethod::Tridiagonal,
        iterations,
    ))
}

/// Reduces the lower triangle of `a` to a symmetric tridiagonal matrix,
/// returning (diagonal, subdiagonal) with the subdiagonal in e[1..n].
fn householder_tridiagonal<T: Float>(n: usize, mut a: Vec<T>) -> (Vec<T>, Vec<T>) {
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let two = lit::<T>(2.0);
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let scale = (0..i).fold(T::zero(), |s, k| s + a[i * n + k].abs());
            if scale == T::zero() {
                e[i] = a[i * n + l];
            } else {
                for k in 0..i {
                    a[i * n + k] = a[i * n + k] / scale;
                    h = h + a[i * n + k] * a[i * n + k];
                }
                let mut f = a[i * n + l];
                let mut g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h = h - f * g;
                a[i * n + l] = f - g;
                f = T::zero();
                for j in 0..i {
                    g = T::zero();
                    for k in 0..=j {
                        g = g + a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..i {
                        g = g + a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f = f + e[j] * a[i * n + j];
                }
                let hh = f / (h * two);
                for j in 0..i {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] = a[j * n + k] - (f * e[k] + g * a[i * n + k]);
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    e[0] = T::zero();
    for (i, di) in d.iter_mut().enumerate() {
        *di = a[i * n + i];
    }
    (d, e)
}

/// Eigenvalues of a symmetric tridiagonal matrix in place; returns the
/// total number of QL iterations.
fn implicit_ql<T: Float>(d: &mut [T], e: &mut [T]) -> Result<usize> {
    const MAX_ITER: usize = 60;
    let n = d.len();
    let two = lit::<T>(2.0);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    // deflate against the matrix scale as well, otherwise a cluster of zero
    // eigenvalues never satisfies the purely relative test
    let anorm = (0..n).fold(T::zero(), |a, i| a.max(d[i].abs() + e[i].abs()));
    let mut total = 0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * (dd + anorm) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            total += 1;
            if iter > MAX_ITER {
                return Err(Error::NoConvergence {
                    sweeps: iter,
                    residual: e[l].abs().to_f64().unwrap_or(f64::NAN),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let signed_r = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + signed_r);
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(total)
}

/// Solver selection for batch spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverChoice {
    Jacobi,
    Tridiagonal,
    /// Jacobi up to [`JACOBI_MAX_N`] vertices, tridiagonal QL beyond.
    Auto,
}

/// Largest order routed to Jacobi by [`SolverChoice::Auto`]. Relation
/// graphs have a handful of highly repeated eigenvalues, which slows cyclic
/// Jacobi to linear convergence; past this size it no longer fits the sweep
/// cap at desk-scale runtimes.
pub const JACOBI_MAX_N: usize = 200;

pub fn solve<T: Float>(m: &DenseSymMatrix<T>, choice: SolverChoice) -> Result<Spectrum<T>> {
    match choice {
        SolverChoice::Jacobi => sym_eigenvalues(m),
        SolverChoice::Tridiagonal => sym_eigenvalues_tridiagonal(m),
        SolverChoice::Auto if m.n() <= JACOBI_MAX_N => sym_eigenvalues(m),
        SolverChoice::Auto => sym_eigenvalues_tridiagonal(m),
    }
}

/// Spectrum of a relation graph's adjacency matrix.
pub fn graph_spectrum<T: Float>(graph: &SchemeGraph, choice: SolverChoice) -> Result<Spectrum<T>> {
    solve(&adjacency_matrix::<T>(graph), choice)
}

/// Largest |λ| after removing one copy of the valency from the spectrum.
pub fn second_eigenvalue<T: Float>(spectrum: &Spectrum<T>, valency: usize) -> Result<T> {
    let Some(largest) = spectrum.largest() else {
        return Ok(T::zero());
    };
    let k = T::from(valency).expect("valency fits the scalar type");
    if (largest - k).abs() > lit(1e-6) {
        return Err(Error::PerronMismatch {
            largest: largest.to_f64().unwrap_or(f64::NAN),
            valency: valency as f64,
        });
    }
    Ok(spectrum.eigenvalues[1..]
        .iter()
        .fold(T::zero(), |acc, &x| acc.max(x.abs())))
}

/// Power-iteration estimates used to cross-check the dense solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerEstimate<T> {
    /// Estimate of max |λ| over the whole spectrum.
    pub largest: T,
    /// Estimate of max |λ| on the complement of the all-ones vector.
    pub second: T,
}

/// Runs `iterations` steps of power iteration on the sparse adjacency,
/// once plainly and once with the all-ones component projected out after
/// every step. Estimates are ||Ax|| / ||x||, which converge to the largest
/// magnitude even when ±λ are both present.
pub fn power_iteration<T: Float>(graph: &SchemeGraph, iterations: usize, seed: u64) -> PowerEstimate<T> {
    let n = graph.n();
    if n == 0 {
        return PowerEstimate {
            largest: T::zero(),
            second: T::zero(),
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<T> = (0..n).map(|_| lit::<T>(rng.random::<f64>() - 0.5)).collect();

    let run = |deflate: bool| {
        let mut x = start.clone();
        if !deflate {
            // keep a Perron component in the start vector
            x.iter_mut().for_each(|v| *v = *v + lit(1.0));
        }
        let mut estimate = T::zero();
        for _ in 0..iterations {
            if deflate {
                let mean = x.iter().fold(T::zero(), |a, &v| a + v) / lit(n as f64);
                x.iter_mut().for_each(|v| *v = *v - mean);
            }
            let norm = x.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
            if norm == T::zero() {
                return T::zero();
            }
            x.iter_mut().for_each(|v| *v = *v / norm);
            let y: Vec<T> = (0..n)
                .map(|u| graph.neighbors(u).iter().fold(T::zero(), |a, &w| a + x[w as usize]))
                .collect();
            estimate = y.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
            x = y;
        }
        estimate
    };
    PowerEstimate {
        largest: run(false),
        second: run(true),
    }
}

/// One row of the spectral-bound table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralRow<T> {
    pub i: usize,
    pub n: usize,
    pub valency: usize,
    pub lambda: T,
    /// λ / q^{(d-2)/2}
    pub lambda_ratio: T,
    /// valency / q^{d-2}
    pub valency_ratio: T,
    pub exceeds_slack: bool,
    pub valency_ratio_in_range: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralBoundReport<T> {
    pub q: u32,
    pub d: usize,
    pub slack: T,
    pub rows: Vec<SpectralRow<T>>,
    pub pass: bool,
}

/// Default reporting threshold on λ / q^{(d-2)/2}.
pub const DEFAULT_SLACK: f64 = 3.0;
/// Range in which valency / q^{d-2} is considered consistent with K = 1 or 1/2.
pub const VALENCY_RATIO_RANGE: (f64, f64) = (0.25, 2.0);

/// Tabulates λ and valency against the q-scales of the asymptotic bound,
/// flagging any λ ratio above `slack`.
pub fn spectral_bound_report<T: Float>(
    q: u32,
    d: usize,
    graphs: &[SchemeGraph],
    spectra: &[Spectrum<T>],
    slack: T,
) -> Result<SpectralBoundReport<T>> {
    if graphs.len() != spectra.len() {
        return Err(Error::DimensionMismatch {
            left: graphs.len(),
            right: spectra.len(),
        });
    }
    let qf = lit::<T>(q as f64);
    let lambda_scale = qf.powf(lit::<T>(d as f64 - 2.0) / lit(2.0));
    let valency_scale = qf.powi(d as i32 - 2);
    let (lo, hi) = (lit::<T>(VALENCY_RATIO_RANGE.0), lit::<T>(VALENCY_RATIO_RANGE.1));
    let mut rows = Vec::with_capacity(graphs.len());
    for (g, s) in graphs.iter().zip(spectra) {
        let valency = g.valency().ok_or_else(|| {
            let degrees = (0..g.n()).map(|v| g.degree(v));
            Error::Irregular {
                relation: g.relation(),
                min: degrees.clone().min().unwrap_or(0),
                max: degrees.max().unwrap_or(0),
            }
        })?;
        let lambda = second_eigenvalue(s, valency)?;
        let lambda_ratio = lambda / lambda_scale;
        let valency_ratio = lit::<T>(valency as f64) / valency_scale;
        rows.push(SpectralRow {
            i: g.relation(),
            n: g.n(),
            valency,
            lambda,
            lambda_ratio,
            valency_ratio,
            exceeds_slack: lambda_ratio > slack,
            valency_ratio_in_range: valency_ratio >= lo && valency_ratio <= hi,
        });
    }
    let pass = rows.iter().all(|r| !r.exceeds_slack);
    Ok(SpectralBoundReport {
        q,
        d,
        slack,
        rows,
        pass,
    })
}

/// Spectra for a batch of graphs, in input order.
pub fn graph_spectra<T: Float + Debug>(graphs: &[SchemeGraph], choice: SolverChoice) -> Result<Vec<Spectrum<T>>> {
    graphs.iter().map(|g| graph_spectrum(g, choice)).collect()
}
