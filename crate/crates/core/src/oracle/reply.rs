use super::OracleError;

/// The first run of decimal digits in `reply`, checked against `1..=n`.
pub fn parse_reply(reply: &str, n: usize) -> Result<usize, OracleError> {
    let start = reply
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| OracleError::NoInteger(reply.to_string()))?;
    let digits = &reply[start..];
    let end = digits.find(|c: char| !c.is_ascii_digit()).unwrap_or(digits.len());
    // too many digits for u64 is out of range all the same
    let value = digits[..end].parse::<u64>().unwrap_or(u64::MAX);
    if value == 0 || value > n as u64 {
        return Err(OracleError::OutOfRange { value, n });
    }
    Ok(value as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_wrapped_integers() {
        assert_eq!(parse_reply("3", 5), Ok(3));
        assert_eq!(parse_reply("The answer is 2.", 5), Ok(2));
        assert_eq!(parse_reply(" 4 ", 6), Ok(4));
        assert_eq!(parse_reply("12 or 3", 20), Ok(12));
    }

    #[test]
    fn rejects_missing_and_out_of_range() {
        assert_eq!(parse_reply("banana", 5), Err(OracleError::NoInteger("banana".into())));
        assert_eq!(parse_reply("6", 5), Err(OracleError::OutOfRange { value: 6, n: 5 }));
        assert_eq!(parse_reply("0", 5), Err(OracleError::OutOfRange { value: 0, n: 5 }));
        assert!(matches!(
            parse_reply("99999999999999999999999", 5),
            Err(OracleError::OutOfRange { .. })
        ));
    }

    #[test]
    fn minus_sign_is_not_part_of_the_integer() {
        assert_eq!(parse_reply("-2", 5), Ok(2));
    }
}
