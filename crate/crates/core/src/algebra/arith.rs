use num_integer::Integer;

use super::AlgebraError;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn checked_lcm(a: u64, b: u64) -> Result<u64, AlgebraError> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(AlgebraError::Overflow)
}

/// Exact binomial coefficient, `None` when it does not fit in 128 bits.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let num = u128::from(n - i);
        let den = u128::from(i + 1);
        let g = acc.gcd(&den);
        let (a, d) = (acc / g, den / g);
        acc = a.checked_mul(num / d)?;
    }
    Some(acc)
}

/// Multinomial coefficient `(k_1 + ... + k_m)! / (k_1! ... k_m!)`.
pub fn multinomial(parts: &[u32]) -> Option<u128> {
    let mut total = 0u64;
    let mut acc: u128 = 1;
    for &k in parts {
        total += u64::from(k);
        acc = acc.checked_mul(binomial(total, u64::from(k))?)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(6, 0), Some(1));
        assert_eq!(binomial(6, 3), Some(20));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(60, 30), Some(118_264_581_564_861_424));
    }

    #[test]
    fn multinomial_matches_factorials() {
        assert_eq!(multinomial(&[2, 1, 1]), Some(12));
        assert_eq!(multinomial(&[4]), Some(1));
        assert_eq!(multinomial(&[0, 0, 3]), Some(1));
        assert_eq!(multinomial(&[1, 1, 1, 1]), Some(24));
    }

    #[test]
    fn lcm_overflow_is_reported() {
        assert_eq!(checked_lcm(4, 6), Ok(12));
        assert_eq!(
            checked_lcm(u64::MAX, u64::MAX - 1),
            Err(AlgebraError::Overflow)
        );
    }
}
