//! Binomial and multinomial coefficients modulo a prime, via Lucas' theorem.

/// `C(n, k)` is odd iff every binary digit of `k` is also set in `n`.
#[inline]
pub fn binomial_is_odd(n: u32, k: u32) -> bool {
    k <= n && k & !n == 0
}

/// A multinomial coefficient `(a_1 + ... + a_m)! / (a_1! ... a_m!)` is odd iff
/// the binary expansions of the `a_i` are pairwise disjoint.
pub fn multinomial_is_odd(parts: &[u32]) -> bool {
    let mut seen = 0u32;
    for &a in parts {
        if a & seen != 0 {
            return false;
        }
        seen |= a;
    }
    true
}

/// `C(n, k) mod p` for a prime `p`, digit by digit in base `p`.
pub fn binomial_mod_p(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p64 = u64::from(p);
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = (n % p64, k % p64);
        if kd > nd {
            return 0;
        }
        acc = acc * small_binomial(nd, kd) % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

fn small_binomial(n: u64, k: u64) -> u64 {
    // n < p, so the exact value fits comfortably for the primes used here.
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num * u128::from(n - i) / u128::from(i + 1);
    }
    num as u64
}

pub(crate) fn inv_mod_p(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p64 = u64::from(p);
    let mut b = u64::from(base % p);
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        exp >>= 1;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut r: u128 = 1;
        for i in 0..k {
            r = r * u128::from(n - i) / u128::from(i + 1);
        }
        r
    }

    #[test]
    fn lucas_matches_exact_values() {
        for n in 0..40u64 {
            for k in 0..=n + 2 {
                let c = exact(n, k);
                assert_eq!(binomial_is_odd(n as u32, k as u32), c % 2 == 1, "C({n},{k})");
                for p in [2u32, 3, 5, 7] {
                    assert_eq!(u128::from(binomial_mod_p(n, k, p)), c % u128::from(p));
                }
            }
        }
    }

    #[test]
    fn multinomial_parity() {
        // 3!/(1!2!) = 3 odd, 2!/(1!1!) = 2 even
        assert!(multinomial_is_odd(&[1, 2]));
        assert!(!multinomial_is_odd(&[1, 1]));
        assert!(multinomial_is_odd(&[0, 5, 0]));
    }

    #[test]
    fn inverses() {
        for p in [3u32, 5, 7, 11] {
            for a in 1..p {
                assert_eq!(a * inv_mod_p(a, p) % p, 1);
            }
        }
    }
}
