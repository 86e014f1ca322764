//! Small integer helpers: primality, factorization, multiplicative orders.

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = num::integer::gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Least `k ≥ 1` with `is_one(x^k)`, given that `x^group_order` is the identity.
pub fn order_from_factors(group_order: u64, factors: &[(u64, u32)], mut is_one_at: impl FnMut(u64) -> bool) -> u64 {
    let mut order = group_order;
    for &(p, e) in factors {
        for _ in 0..e {
            if order % p == 0 && is_one_at(order / p) {
                order /= p;
            } else {
                break;
            }
        }
    }
    order
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn order_mod(a: u64, m: u64) -> u64 {
    let mut k = 1;
    let mut x = a % m;
    while x != 1 {
        x = mul_mod(x, a, m);
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_of_mersenne_numbers() {
        assert_eq!(factorize((1 << 18) - 1), vec![(3, 3), (7, 1), (19, 1), (73, 1)]);
        assert_eq!(factorize((1 << 28) - 1), vec![(3, 1), (5, 1), (29, 1), (43, 1), (113, 1), (127, 1)]);
        let n = (1u64 << 60) - 1;
        let back: u64 = factorize(n).iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(back, n);
    }

    #[test]
    fn orders_mod_p() {
        assert_eq!(order_mod(2, 7), 3);
        assert_eq!(order_mod(2, 19), 18);
        assert_eq!(order_mod(2, 29), 28);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(561));
    }
}
