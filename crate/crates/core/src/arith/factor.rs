//! Factorization in `Q[x]` by the Berlekamp-Zassenhaus method: factor modulo a
//! small prime, Hensel-lift, recombine by trial division over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{bigint_mod, factor_squarefree, primes_from, symmetric, PolyP};
use super::QPoly;

/// Monic irreducible factors of `f` with multiplicities, in a deterministic order
/// (by degree, then coefficients).
pub fn factor_q(f: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    for (s, mult) in f.squarefree_decomposition() {
        for g in factor_squarefree_int(&s.to_primitive_integer()) {
            out.push((QPoly::from_integers(&g).monic(), mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| cmp_coeffs(&a.0, &b.0))
            .then(a.1.cmp(&b.1))
    });
    out
}

fn cmp_coeffs(a: &QPoly, b: &QPoly) -> std::cmp::Ordering {
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

pub fn is_irreducible(f: &QPoly) -> bool {
    if f.deg() == 0 {
        return false;
    }
    let fs = factor_q(f);
    fs.len() == 1 && fs[0].1 == 1
}

/// Rational roots of `f` (each once).
pub fn rational_roots(f: &QPoly) -> Vec<super::Q> {
    if f.is_zero() {
        return vec![];
    }
    let mut r: Vec<_> = factor_q(f)
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| -g.coeff(0))
        .collect();
    r.sort();
    r
}

fn int_poly_trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    int_poly_trim(out)
}

/// Exact division in `Z[x]`; `None` if `d` does not divide `f`.
fn int_exact_div(f: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let dd = d.len() - 1;
    if f.len() < d.len() {
        return if f.is_empty() { Some(vec![]) } else { None };
    }
    let lc = &d[dd];
    let mut r = f.to_vec();
    let mut quo = vec![BigInt::zero(); f.len() - dd];
    for i in (0..quo.len()).rev() {
        let (c, rem) = r[i + dd].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, dj) in d.iter().enumerate() {
                r[i + j] -= &c * dj;
            }
        }
        quo[i] = c;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(int_poly_trim(quo))
}

fn primitive_part(v: Vec<BigInt>) -> Vec<BigInt> {
    let v = int_poly_trim(v);
    if v.is_empty() {
        return v;
    }
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if v.last().unwrap().is_negative() {
        g = -g;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// Irreducible factors in `Z[x]` of a primitive squarefree polynomial of degree >= 1.
pub fn factor_squarefree_int(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut f = int_poly_trim(f.to_vec());
    let mut out = Vec::new();
    if f.len() <= 2 {
        return vec![f];
    }
    if f[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        f.remove(0);
        if f.len() <= 2 {
            if f.len() == 2 {
                out.push(f);
            }
            return out;
        }
    }
    out.extend(zassenhaus(&f));
    out
}

fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // Pick the prime giving the fewest modular factors among a handful of good ones.
    let mut best: Option<(u64, Vec<PolyP>)> = None;
    let mut tried = 0;
    for p in primes_from(3) {
        if bigint_mod(&lc, p) == 0 {
            continue;
        }
        let fp = PolyP::from_ints(p, f);
        if !fp.is_squarefree() {
            continue;
        }
        let fac = factor_squarefree(&fp, &mut rng);
        if fac.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| fac.len() < b.len()) {
            best = Some((p, fac));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    let (p, modular) = best.expect("no suitable prime");

    // Bound on coefficients of lc * (factor / lc(factor)).
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (norm2.sqrt() + 1u32) * lc.abs() * (BigInt::one() << n) * 2u32;
    let mut a = 1u32;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        a += 1;
    }

    let lifted = hensel_multi(f, &modular, p, a);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut f_cur = f.to_vec();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        for subset in combinations(&remaining, s) {
            let lc_cur = f_cur.last().unwrap().clone();
            let mut g = vec![lc_cur];
            for &i in &subset {
                g = int_mul(&g, &lifted[i]);
                g = g.iter().map(|c| c.mod_floor(&modulus)).collect();
            }
            let g: Vec<BigInt> = g.iter().map(|c| symmetric(c, &modulus)).collect();
            let g = primitive_part(g);
            if let Some(quo) = int_exact_div(&f_cur, &g) {
                found = Some((subset, g, quo));
                break;
            }
        }
        match found {
            Some((subset, g, quo)) => {
                out.push(g);
                f_cur = quo;
                remaining.retain(|i| !subset.contains(i));
            }
            None => s += 1,
        }
    }
    if f_cur.len() > 1 {
        out.push(primitive_part(f_cur));
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

fn to_int(p: &PolyP) -> Vec<BigInt> {
    p.c.iter().map(|&x| BigInt::from(x)).collect()
}

/// Lifts `f = lc * prod(factors) mod p` to monic factors modulo `p^a`.
fn hensel_multi(f: &[BigInt], factors: &[PolyP], p: u64, a: u32) -> Vec<Vec<BigInt>> {
    let modulus = BigInt::from(p).pow(a);
    if factors.len() == 1 {
        let lc = f.last().unwrap();
        let inv = lc.modinv(&modulus).expect("leading coefficient invertible");
        return vec![f.iter().map(|c| (c * &inv).mod_floor(&modulus)).collect()];
    }
    let k = factors.len() / 2;
    let g0 = factors[..k].iter().fold(PolyP::one(p), |acc, x| acc.mul(x));
    let lcp = bigint_mod(f.last().unwrap(), p);
    let h0 = factors[k..].iter().fold(PolyP::one(p).scale(lcp), |acc, x| acc.mul(x));
    let (g, h) = hensel_pair(f, &g0, &h0, p, a);
    let mut out = hensel_multi(&g, &factors[..k], p, a);
    out.extend(hensel_multi(&h, &factors[k..], p, a));
    out
}

/// Linear Hensel lifting of `f = g h mod p` (g monic) to modulus `p^a`.
fn hensel_pair(f: &[BigInt], g0: &PolyP, h0: &PolyP, p: u64, a: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let modulus = BigInt::from(p).pow(a);
    let (one, s, t) = PolyP::xgcd(g0, h0);
    debug_assert_eq!(one.deg(), 0);
    let mut g = to_int(g0);
    let mut h = to_int(h0);
    *h.last_mut().unwrap() = f.last().unwrap().mod_floor(&modulus);
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    for _ in 1..a {
        let gh = int_mul(&g, &h);
        let next = &pk * &pb;
        let diff: Vec<BigInt> = (0..f.len().max(gh.len()))
            .map(|i| {
                let fi = f.get(i).cloned().unwrap_or_default();
                let gi = gh.get(i).cloned().unwrap_or_default();
                let d = (fi - gi).mod_floor(&next);
                debug_assert!((&d % &pk).is_zero());
                d / &pk
            })
            .collect();
        let e = PolyP::from_ints(p, &diff);
        let et = e.mul(&t);
        let (quo, tau) = et.div_rem(g0);
        let sigma = e.mul(&s).add(&quo.mul(h0));
        for (i, c) in tau.c.iter().enumerate() {
            g[i] = (&g[i] + &pk * BigInt::from(*c)).mod_floor(&modulus);
        }
        for (i, c) in sigma.c.iter().enumerate() {
            h[i] = (&h[i] + &pk * BigInt::from(*c)).mod_floor(&modulus);
        }
        pk = next;
    }
    (g, h)
}
