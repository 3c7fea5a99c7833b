//! Polynomials over prime fields `F_p` with `p < 2^63`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use super::Q;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    Some(powmod(a, p - 2, p))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Odd primes in increasing order starting after `start`.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(2)..).filter(|&n| n % 2 == 1 && is_prime_u64(n))
}

pub fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

/// Reduction of a rational number; `None` if the denominator vanishes mod `p`.
pub fn q_mod(x: &Q, p: u64) -> Option<u64> {
    let n = bigint_mod(x.numer(), p);
    let d = bigint_mod(x.denom(), p);
    Some(mulmod(n, invmod(d, p)?, p))
}

/// Symmetric lift of `x mod m` into `(-m/2, m/2]`.
pub fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Dense polynomial over `F_p`, ascending, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyP {
    pub p: u64,
    pub c: Vec<u64>,
}

impl PolyP {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyP { p, c }
    }

    pub fn from_ints(p: u64, c: &[BigInt]) -> Self {
        Self::new(p, c.iter().map(|x| bigint_mod(x, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        PolyP { p, c: vec![] }
    }

    pub fn one(p: u64) -> Self {
        PolyP { p, c: vec![1 % p] }
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn add(&self, o: &PolyP) -> PolyP {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| addmod(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0), self.p))
            .collect();
        PolyP::new(self.p, v)
    }

    pub fn sub(&self, o: &PolyP) -> PolyP {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| submod(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0), self.p))
            .collect();
        PolyP::new(self.p, v)
    }

    pub fn scale(&self, s: u64) -> PolyP {
        PolyP::new(self.p, self.c.iter().map(|&x| mulmod(x, s, self.p)).collect())
    }

    pub fn mul(&self, o: &PolyP) -> PolyP {
        if self.is_zero() || o.is_zero() {
            return PolyP::zero(self.p);
        }
        let p = self.p;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % pp;
            }
        }
        PolyP::new(p, acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn div_rem(&self, d: &PolyP) -> (PolyP, PolyP) {
        assert!(!d.is_zero());
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (PolyP::zero(p), self.clone());
        }
        let inv = invmod(d.lc(), p).expect("leading coefficient not invertible");
        let dd = d.deg();
        let mut r = self.c.clone();
        let mut quo = vec![0u64; r.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = mulmod(r[i + dd], inv, p);
            if c != 0 {
                for (j, &dj) in d.c.iter().enumerate() {
                    r[i + j] = submod(r[i + j], mulmod(c, dj, p), p);
                }
            }
            quo[i] = c;
        }
        r.truncate(dd);
        (PolyP::new(p, quo), PolyP::new(p, r))
    }

    pub fn rem(&self, d: &PolyP) -> PolyP {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> PolyP {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), self.p).unwrap())
    }

    pub fn gcd(a: &PolyP, b: &PolyP) -> PolyP {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn xgcd(a: &PolyP, b: &PolyP) -> (PolyP, PolyP, PolyP) {
        let p = a.p;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (PolyP::one(p), PolyP::zero(p));
        let (mut t0, mut t1) = (PolyP::zero(p), PolyP::one(p));
        while !r1.is_zero() {
            let (quo, r) = r0.div_rem(&r1);
            let s = s0.sub(&quo.mul(&s1));
            let t = t0.sub(&quo.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = invmod(r0.lc(), p).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> PolyP {
        let p = self.p;
        PolyP::new(
            p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulmod(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.c.iter().rev() {
            acc = addmod(mulmod(acc, x, self.p), c, self.p);
        }
        acc
    }

    /// `self^e mod m`.
    pub fn powmod(&self, e: &BigUint, m: &PolyP) -> PolyP {
        let base = self.rem(m);
        let mut r = PolyP::one(self.p).rem(m);
        for i in (0..e.bits()).rev() {
            r = r.mul(&r).rem(m);
            if e.bit(i) {
                r = r.mul(&base).rem(m);
            }
        }
        r
    }

    pub fn is_squarefree(&self) -> bool {
        PolyP::gcd(self, &self.derivative()).deg() == 0
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &PolyP) -> Vec<(PolyP, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = PolyP::x(p);
    let mut h = x.clone();
    let mut i = 0;
    while f.deg() >= 2 * (i + 1) {
        i += 1;
        h = h.powmod(&BigUint::from(p), &f);
        let g = PolyP::gcd(&f, &h.sub(&x));
        if g.deg() > 0 {
            f = f.div_rem(&g).0;
            h = h.rem(&f);
            out.push((g, i));
        }
    }
    if f.deg() > 0 {
        let d = f.deg();
        out.push((f, d));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting (odd `p`).
fn equal_degree<R: Rng>(f: &PolyP, d: usize, rng: &mut R, out: &mut Vec<PolyP>) {
    if f.deg() == d {
        out.push(f.monic());
        return;
    }
    let p = f.p;
    let e = (num_traits::pow(BigUint::from(p), d) - 1u32) / 2u32;
    loop {
        let a = PolyP::new(p, (0..f.deg()).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        let g = PolyP::gcd(&a, f);
        if g.deg() > 0 && g.deg() < f.deg() {
            equal_degree(&g, d, rng, out);
            equal_degree(&f.div_rem(&g).0, d, rng, out);
            return;
        }
        let b = a.powmod(&e, f).sub(&PolyP::one(p));
        let g = PolyP::gcd(&b, f);
        if g.deg() > 0 && g.deg() < f.deg() {
            equal_degree(&g, d, rng, out);
            equal_degree(&f.div_rem(&g).0, d, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial over `F_p`, `p` odd.
///
pub fn factor_squarefree<R: Rng>(f: &PolyP, rng: &mut R) -> Vec<PolyP> {
    let f = f.monic();
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&f) {
        equal_degree(&g, d, rng, &mut out);
    }
    out.sort_by(|a, b| a.c.len().cmp(&b.c.len()).then_with(|| a.c.cmp(&b.c)));
    out
}

/// All roots in `F_p` of a nonzero polynomial.
pub fn roots<R: Rng>(f: &PolyP, rng: &mut R) -> Vec<u64> {
    let p = f.p;
    let f = f.monic();
    if f.deg() == 0 {
        return vec![];
    }
    let x = PolyP::x(p);
    let xp = x.powmod(&BigUint::from(p), &f);
    let g = PolyP::gcd(&f, &xp.sub(&x));
    if g.deg() == 0 {
        return vec![];
    }
    let mut lin = Vec::new();
    split_linear(&g, rng, &mut lin);
    let mut r: Vec<u64> = lin.into_iter().map(|l| submod(0, l.c[0], p)).collect();
    r.sort_unstable();
    r
}

fn split_linear<R: Rng>(f: &PolyP, rng: &mut R, out: &mut Vec<PolyP>) {
    if f.deg() == 1 {
        out.push(f.monic());
        return;
    }
    let p = f.p;
    let e = BigUint::from((p - 1) / 2);
    loop {
        let shift = rng.gen_range(0..p);
        let a = PolyP::new(p, vec![shift, 1]);
        let b = a.powmod(&e, f).sub(&PolyP::one(p));
        let g = PolyP::gcd(&b, f);
        if g.deg() > 0 && g.deg() < f.deg() {
            split_linear(&g, rng, out);
            split_linear(&f.div_rem(&g).0, rng, out);
            return;
        }
    }
}

/// Rank of a dense matrix over `F_p` (row-major, `rows x cols`).
pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = invmod(m[rank][col], p).unwrap();
        for r in rank + 1..rows {
            let f = m[r][col];
            if f == 0 {
                continue;
            }
            let f = mulmod(f, inv, p);
            for c in col..cols {
                let v = mulmod(f, m[rank][c], p);
                m[r][c] = submod(m[r][c], v, p);
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn miller_rabin_known_values() {
        assert!(is_prime_u64((1u64 << 61) - 1));
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(1_000_000_007));
    }

    #[test]
    fn factor_mod_p_reconstructs() {
        let p = 101;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // (x^2+1)(x-3)(x^3+x+1) mod 101
        let f = PolyP::new(p, vec![1, 0, 1])
            .mul(&PolyP::new(p, vec![p - 3, 1]))
            .mul(&PolyP::new(p, vec![1, 1, 0, 1]));
        let fs = factor_squarefree(&f, &mut rng);
        let prod = fs.iter().fold(PolyP::one(p), |a, b| a.mul(b));
        assert_eq!(prod, f.monic());
        for g in &fs {
            assert!(g.deg() >= 1);
        }
    }

    #[test]
    fn roots_mod_p() {
        let p = 1_000_000_007;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = PolyP::new(p, vec![p - 2, 0, 1]); // x^2 - 2
        let r = roots(&f, &mut rng);
        for x in &r {
            assert_eq!(f.eval(*x), 0);
        }
    }

    #[test]
    fn modular_rank() {
        let p = 97;
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod_p(m, p), 2);
    }
}
