use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::NumstrError;

/// Value of a binary word, most significant bit first. Leading zeros are
/// allowed and the empty word has value 0.
pub fn bin_value(w: &str) -> Result<BigUint, NumstrError> {
    let mut v = BigUint::zero();
    for c in w.chars() {
        v <<= 1u32;
        match c {
            '0' => {}
            '1' => v += BigUint::one(),
            other => return Err(NumstrError::ForeignSymbol(other)),
        }
    }
    Ok(v)
}

/// Shortest binary representation: no leading zeros, `"0"` for zero.
pub fn min_bin(n: impl Into<BigUint>) -> String {
    let n: BigUint = n.into();
    if n.is_zero() {
        "0".to_string()
    } else {
        n.to_str_radix(2)
    }
}

pub fn is_binary(w: &str) -> bool {
    w.chars().all(|c| c == '0' || c == '1')
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fifteen() {
        assert_eq!(bin_value("1111").unwrap(), BigUint::from(15u32));
        assert_eq!(bin_value("01111").unwrap(), BigUint::from(15u32));
        assert_eq!(bin_value("10").unwrap(), BigUint::from(2u32));
        assert_eq!(bin_value("").unwrap(), BigUint::zero());
        assert_eq!(min_bin(0u32), "0");
        assert_eq!(min_bin(15u32), "1111");
    }

    #[test]
    fn foreign_symbol() {
        assert_eq!(bin_value("012"), Err(NumstrError::ForeignSymbol('2')));
    }

    proptest! {
        #[test]
        fn min_bin_roundtrip(n in any::<u64>()) {
            prop_assert_eq!(bin_value(&min_bin(n)).unwrap(), BigUint::from(n));
        }

        #[test]
        fn leading_zeros_do_not_change_value(n in any::<u32>(), pad in 0usize..8) {
            let w = format!("{}{}", "0".repeat(pad), min_bin(n));
            prop_assert_eq!(bin_value(&w).unwrap(), BigUint::from(n));
        }
    }
}
