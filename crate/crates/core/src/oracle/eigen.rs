//! Hermitian eigen-solvers for Nyström matrices.
//!
//! [`lanczos`] extracts the extremal part of the spectrum with full
//! reorthogonalization and random restarts on breakdown; [`dense`] wraps
//! nalgebra's full solver and is only practical for small matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(n: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                data.push(f(i, k));
            }
        }
        HermitianMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> Complex64 {
        self.data[i * self.n + k]
    }

    pub fn matvec(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            *o = acc;
        }
    }

    /// max |M_ik - conj(M_ki)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for k in i..self.n {
                worst = worst.max((self.get(i, k) - self.get(k, i).conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, k| self.get(i, k))
    }
}

/// Eigenpairs sorted by descending eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// Unit eigenvectors, one per value.
    pub vectors: Vec<Vec<Complex64>>,
    /// ‖M v - λ v‖ per pair.
    pub residuals: Vec<f64>,
}

impl EigenPairs {
    /// Eigenvalue magnitudes sorted descending (the singular values of a Hermitian matrix).
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    fn sorted(mut self) -> Self {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| self.values[b].total_cmp(&self.values[a]));
        self.values = idx.iter().map(|&i| self.values[i]).collect();
        self.vectors = idx
            .iter()
            .map(|&i| std::mem::take(&mut self.vectors[i]))
            .collect();
        self.residuals = idx.iter().map(|&i| self.residuals[i]).collect();
        self
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalize(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    // two passes of classical Gram–Schmidt
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng, basis: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    for _ in 0..4 {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        orthogonalize(&mut v, basis);
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

fn residual(m: &HermitianMatrix, value: f64, v: &[Complex64]) -> f64 {
    let mut mv = vec![Complex64::new(0.0, 0.0); v.len()];
    m.matvec(v, &mut mv);
    mv.iter()
        .zip(v)
        .map(|(a, b)| (a - b * value).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Lanczos with full reorthogonalization, `steps` Krylov vectors, and a
/// fresh random direction whenever the current Krylov space becomes invariant.
pub fn lanczos(m: &HermitianMatrix, steps: usize, seed: u64) -> Result<EigenPairs> {
    let n = m.dim();
    let steps = steps.min(n);
    if steps == 0 {
        return Err(Error::Numerical("empty matrix".into()));
    }
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut q = random_unit(n, &mut rng, &basis)
        .ok_or_else(|| Error::Numerical("no start vector".into()))?;
    let mut w = vec![Complex64::new(0.0, 0.0); n];

    loop {
        m.matvec(&q, &mut w);
        let a = dot(&q, &w).re;
        basis.push(q);
        alpha.push(a);
        if basis.len() == steps {
            break;
        }
        let mut v = w.clone();
        orthogonalize(&mut v, &basis);
        let b = norm(&v);
        if b > 1e-13 * scale {
            v.iter_mut().for_each(|x| *x /= b);
            beta.push(b);
            q = v;
        } else {
            match random_unit(n, &mut rng, &basis) {
                Some(fresh) => {
                    beta.push(0.0);
                    q = fresh;
                }
                None => break,
            }
        }
    }

    let k = basis.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for c in 0..k {
        let theta = eig.eigenvalues[c];
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for (j, qj) in basis.iter().enumerate() {
            let s = eig.eigenvectors[(j, c)];
            for (yi, qi) in y.iter_mut().zip(qj) {
                *yi += qi * s;
            }
        }
        let ny = norm(&y);
        y.iter_mut().for_each(|x| *x /= ny);
        residuals.push(residual(m, theta, &y));
        values.push(theta);
        vectors.push(y);
    }
    Ok(EigenPairs {
        values,
        vectors,
        residuals,
    }
    .sorted())
}

/// Full Hermitian eigen-decomposition.
pub fn dense(m: &HermitianMatrix) -> EigenPairs {
    let n = m.dim();
    let eig = SymmetricEigen::new(m.to_nalgebra());
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for c in 0..n {
        let v: Vec<Complex64> = eig.eigenvectors.column(c).iter().copied().collect();
        let value = eig.eigenvalues[c];
        residuals.push(residual(m, value, &v));
        values.push(value);
        vectors.push(v);
    }
    EigenPairs {
        values,
        vectors,
        residuals,
    }
    .sorted()
}
