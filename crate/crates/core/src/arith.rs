//! Small integer helpers shared by the algebra modules.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn mobius(n: u32) -> i64 {
    let mut n = n as u64;
    let mut mu = 1i64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of monic irreducibles of degree `d` over F_q (necklace formula).
pub fn irreducible_count(q: u64, d: u32) -> u64 {
    let mut total: i128 = 0;
    for e in divisors(d) {
        total += mobius(e) as i128 * (q as i128).pow(d / e);
    }
    (total / d as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(2) && is_prime(7) && !is_prime(9) && !is_prime(1));
        assert_eq!(prime_factors(40353606), vec![2, 3, 19, 37, 1063]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }

    #[test]
    fn necklace_counts() {
        assert_eq!(irreducible_count(3, 2), 3);
        assert_eq!(irreducible_count(2, 3), 2);
        assert_eq!(irreducible_count(2, 4), 3);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
    }
}
