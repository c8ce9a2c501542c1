//! Arithmetic, linear algebra and root finding over a prime field `F_ℓ`
//! with `ℓ < 2^32`.

#[derive(Clone, Copy, Debug)]
pub struct Fl {
    pub ell: u64,
}

impl Fl {
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.ell
    }
    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.ell - b) % self.ell
    }
    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.ell
    }
    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.ell - a) % self.ell
    }
    pub fn pow(self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.ell;
        b %= self.ell;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.ell));
        self.pow(a, self.ell - 2)
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least prime `ℓ ≡ 1 (mod m)` with `ℓ > lower`.
pub fn prime_one_mod(m: u64, lower: u64) -> u64 {
    let mut ell = (lower / m + 1) * m + 1;
    while !is_prime_u64(ell) {
        ell += m;
    }
    ell
}

/// Least primitive root modulo the prime `ℓ`.
pub fn primitive_root(ell: u64) -> u64 {
    let fl = Fl { ell };
    let factors = prime_factors(ell - 1);
    (2..ell).find(|&g| factors.iter().all(|&p| fl.pow(g, (ell - 1) / p) != 1)).unwrap_or(1)
}

fn trim(p: &mut Vec<u64>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    if p.is_empty() {
        p.push(0);
    }
}

fn deg(p: &[u64]) -> usize {
    p.len() - 1
}

fn is_zero(p: &[u64]) -> bool {
    p.iter().all(|&c| c == 0)
}

fn monic(fl: Fl, p: &[u64]) -> Vec<u64> {
    let lead = fl.inv(*p.last().unwrap());
    p.iter().map(|&c| fl.mul(c, lead)).collect()
}

fn poly_rem(fl: Fl, a: &[u64], b: &[u64]) -> Vec<u64> {
    let b = monic(fl, b);
    let db = deg(&b);
    if db == 0 {
        return vec![0];
    }
    let mut r = a.to_vec();
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = fl.sub(r[shift + j], fl.mul(c, bj));
            }
        }
        r.pop();
    }
    trim(&mut r);
    r
}

fn poly_divmod(fl: Fl, a: &[u64], b: &[u64]) -> Vec<u64> {
    let b = monic(fl, b);
    let db = deg(&b);
    let mut r = a.to_vec();
    if r.len() <= db {
        return vec![0];
    }
    let mut quo = vec![0; r.len() - db];
    for i in (0..quo.len()).rev() {
        let c = r[i + db];
        quo[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = fl.sub(r[i + j], fl.mul(c, bj));
        }
    }
    quo
}

fn poly_mulmod(fl: Fl, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let mut prod = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = fl.add(prod[i + j], fl.mul(x, y));
        }
    }
    poly_rem(fl, &prod, m)
}

fn poly_powmod(fl: Fl, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut r = vec![1];
    let mut b = poly_rem(fl, base, m);
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mulmod(fl, &r, &b, m);
        }
        b = poly_mulmod(fl, &b, &b, m);
        e >>= 1;
    }
    r
}

fn poly_gcd(fl: Fl, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !is_zero(&y) {
        let r = poly_rem(fl, &x, &y);
        x = y;
        y = r;
    }
    if is_zero(&x) {
        x
    } else {
        monic(fl, &x)
    }
}

fn poly_sub(fl: Fl, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> =
        (0..n).map(|i| fl.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0))).collect();
    trim(&mut out);
    out
}

/// Distinct roots in `F_ℓ` of a nonzero polynomial, sorted ascending.
/// Deterministic equal-degree splitting with shifts `x + a`, `a = 0, 1, …`.
pub fn roots(fl: Fl, f: &[u64]) -> Vec<u64> {
    let f = monic(fl, f);
    if deg(&f) == 0 {
        return Vec::new();
    }
    let xl = poly_powmod(fl, &[0, 1], fl.ell, &f);
    let g = poly_gcd(fl, &f, &poly_sub(fl, &xl, &[0, 1]));
    let mut out = Vec::new();
    split(fl, &g, &mut out);
    out.sort_unstable();
    out
}

fn split(fl: Fl, g: &[u64], out: &mut Vec<u64>) {
    match deg(g) {
        0 => {}
        1 => out.push(fl.neg(fl.mul(g[0], fl.inv(g[1])))),
        _ => {
            for a in 0..fl.ell {
                let h = poly_powmod(fl, &[a, 1], (fl.ell - 1) / 2, g);
                let d = poly_gcd(fl, g, &poly_sub(fl, &h, &[1]));
                if deg(&d) > 0 && deg(&d) < deg(g) {
                    let other = poly_divmod(fl, g, &d);
                    split(fl, &d, out);
                    split(fl, &other, out);
                    return;
                }
            }
            unreachable!("equal-degree splitting failed");
        }
    }
}

/// Characteristic polynomial of a square row-major matrix over `F_ℓ`.
pub fn char_poly(fl: Fl, n: usize, a: &[u64]) -> Vec<u64> {
    let mut h = a.to_vec();
    let at = |i: usize, j: usize| i * n + j;
    for m in 0..n.saturating_sub(2) {
        let Some(piv) = (m + 1..n).find(|&i| h[at(i, m)] != 0) else { continue };
        if piv != m + 1 {
            for j in 0..n {
                h.swap(at(piv, j), at(m + 1, j));
            }
            for i in 0..n {
                h.swap(at(i, piv), at(i, m + 1));
            }
        }
        let inv = fl.inv(h[at(m + 1, m)]);
        for i in m + 2..n {
            let t = fl.mul(h[at(i, m)], inv);
            if t == 0 {
                continue;
            }
            for j in 0..n {
                let v = fl.mul(t, h[at(m + 1, j)]);
                h[at(i, j)] = fl.sub(h[at(i, j)], v);
            }
            for r in 0..n {
                let v = fl.mul(t, h[at(r, i)]);
                h[at(r, m + 1)] = fl.add(h[at(r, m + 1)], v);
            }
        }
    }
    let mut p: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let mut next = vec![0; k + 2];
        for (d, &c) in p[k].iter().enumerate() {
            next[d + 1] = fl.add(next[d + 1], c);
            next[d] = fl.sub(next[d], fl.mul(h[at(k, k)], c));
        }
        let mut prod = 1;
        for i in (0..k).rev() {
            prod = fl.mul(prod, h[at(i + 1, i)]);
            let coef = fl.mul(h[at(i, k)], prod);
            if coef != 0 {
                for (d, &c) in p[i].iter().enumerate() {
                    next[d] = fl.sub(next[d], fl.mul(coef, c));
                }
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(fl: Fl, rows: &mut Vec<Vec<u64>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, piv);
        let inv = fl.inv(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = fl.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let c = rows[i][col];
                for j in 0..ncols {
                    let v = fl.mul(c, rows[r][j]);
                    rows[i][j] = fl.sub(rows[i][j], v);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the null space `{y : A y = 0}` of a row-major `n×n` matrix.
pub fn null_space(fl: Fl, n: usize, a: &[u64]) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = (0..n).map(|i| a[i * n..(i + 1) * n].to_vec()).collect();
    let pivots = rref(fl, &mut rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut y = vec![0; n];
            y[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                y[pc] = fl.neg(rows[r][fc]);
            }
            y
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_roots() {
        assert_eq!(prime_one_mod(6, 10), 13);
        assert_eq!(primitive_root(13), 2);
        let fl = Fl { ell: 13 };
        // (x-2)(x-5)(x-5)(x^2+1 has roots 5, 8 mod 13)
        let mut f = vec![1];
        for r in [2u64, 5, 5] {
            let mut g = vec![0; f.len() + 1];
            for (i, &c) in f.iter().enumerate() {
                g[i + 1] = fl.add(g[i + 1], c);
                g[i] = fl.sub(g[i], fl.mul(r, c));
            }
            f = g;
        }
        assert_eq!(roots(fl, &f), vec![2, 5]);
        assert_eq!(roots(fl, &[1, 0, 1]), vec![5, 8]);
        assert_eq!(roots(fl, &[2, 0, 1]), Vec::<u64>::new());
    }

    #[test]
    fn char_poly_and_kernel() {
        let fl = Fl { ell: 101 };
        let a = vec![2, 1, 0, 0, 2, 0, 0, 0, 3];
        assert_eq!(roots(fl, &char_poly(fl, 3, &a)), vec![2, 3]);
        let shifted: Vec<u64> = a.iter().enumerate().map(|(i, &x)| if i % 4 == 0 { fl.sub(x, 2) } else { x }).collect();
        assert_eq!(null_space(fl, 3, &shifted).len(), 1);
    }
}
