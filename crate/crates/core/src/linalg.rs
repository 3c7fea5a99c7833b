//! Exact linear algebra over `K`, over `K(z)` and modulo primes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::modp::{self, addmod, mulmod, primes_from, q_mod, PolyP};
use crate::field::{Field, KElem};
use crate::poly::Poly;
use crate::ratfun::RatFun;

/// Minimal field interface for generic elimination.
pub trait Scalar: Clone {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Field division; `o` is nonzero.
    fn div(&self, o: &Self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
}

impl Scalar for KElem {
    fn is_zero(&self) -> bool {
        KElem::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        KElem::div(self, o).unwrap()
    }
    fn zero_like(&self) -> Self {
        KElem::zero(self.field())
    }
    fn one_like(&self) -> Self {
        KElem::one(self.field())
    }
}

impl Scalar for RatFun {
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        RatFun::div(self, o).unwrap()
    }
    fn zero_like(&self) -> Self {
        RatFun::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFun::one(self.field())
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<T: Scalar>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].one_like().div(&m[r][c]);
        for j in c..cols {
            if !m[r][j].is_zero() {
                m[r][j] = m[r][j].mul(&inv);
            }
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        m[i][j] = m[i][j].sub(&f.mul(&m[r][j]));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right null space `{x : m x = 0}`; `zero` fixes the scalar type's context.
pub fn nullspace<T: Scalar>(m: &[Vec<T>], cols: usize, zero: &T) -> Vec<Vec<T>> {
    let mut a: Vec<Vec<T>> = m.to_vec();
    let pivots = rref(&mut a);
    let one = zero.one_like();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            if !a[row][free].is_zero() {
                v[pc] = zero.sub(&a[row][free]);
            }
        }
        basis.push(v);
    }
    basis
}

pub fn rank<T: Scalar>(m: &[Vec<T>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Fraction-free (Bareiss) elimination on a polynomial matrix. Returns the
/// echelon form and pivot columns; all divisions are exact.
pub fn bareiss(mut m: Vec<Vec<Poly>>) -> (Vec<Vec<Poly>>, Vec<usize>) {
    let rows = m.len();
    if rows == 0 {
        return (m, vec![]);
    }
    let cols = m[0].len();
    let field = m[0][0].field().clone();
    let mut prev = Poly::one(&field);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let t = &(&m[r][c] * &m[i][j]) - &(&m[i][c] * &m[r][j]);
                m[i][j] = t.exact_div(&prev);
            }
            m[i][c] = Poly::zero(&field);
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// A nonzero vector in the right kernel of a polynomial matrix with exactly one
/// more column than its rank, found by Bareiss elimination and back-substitution
/// over `K(z)`.
pub fn poly_kernel_vector(m: Vec<Vec<Poly>>, cols: usize) -> Option<Vec<RatFun>> {
    let field = m.first()?.first()?.field().clone();
    let (e, pivots) = bareiss(m);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![RatFun::zero(&field); cols];
    x[free] = RatFun::one(&field);
    for (row, &pc) in pivots.iter().enumerate().rev() {
        let mut s = RatFun::zero(&field);
        for j in pc + 1..cols {
            if !e[row][j].is_zero() && !x[j].is_zero() {
                s = &s + &x[j].mul_poly(&e[row][j]);
            }
        }
        x[pc] = (-&s).div(&RatFun::from_poly(e[row][pc].clone())).unwrap();
    }
    Some(x)
}

/// A reduction map `K -> F_q` sending the generator to a root of `p mod q`.
#[derive(Clone, Debug)]
pub struct ModularImage {
    pub q: u64,
    pub beta: u64,
}

impl ModularImage {
    /// Picks a prime around `2^61` with a root of the field polynomial; the
    /// `skip`-th suitable prime is returned so callers can retry.
    pub fn for_field(field: &Field, skip: usize) -> ModularImage {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut seen = 0;
        for q in primes_from((1u64 << 61) + 1) {
            let coeffs: Option<Vec<u64>> = field.min_poly().coeffs().iter().map(|c| q_mod(c, q)).collect();
            let Some(c) = coeffs else { continue };
            let roots = modp::roots(&PolyP::new(q, c), &mut rng);
            if let Some(&b) = roots.first() {
                if seen == skip {
                    return ModularImage { q, beta: b };
                }
                seen += 1;
            }
        }
        unreachable!()
    }

    /// Image of `x`, or `None` if a denominator vanishes modulo `q`.
    pub fn map(&self, x: &KElem) -> Option<u64> {
        let mut acc = 0u64;
        for c in x.coords().iter().rev() {
            acc = addmod(mulmod(acc, self.beta, self.q), q_mod(c, self.q)?, self.q);
        }
        Some(acc)
    }

    /// Rank of the reduced matrix, or `None` if some entry does not reduce.
    pub fn rank(&self, m: &[Vec<KElem>]) -> Option<usize> {
        let red: Option<Vec<Vec<u64>>> = m.iter().map(|row| row.iter().map(|x| self.map(x)).collect()).collect();
        Some(modp::rank_mod_p(red?, self.q))
    }
}
