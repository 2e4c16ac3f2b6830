use crate::error::{Error, Result};

/// Parse a group spec such as `C4xC2^3` into cyclic factor orders.
///
/// Factors are `C<n>` joined by `x`, each optionally followed by `^k`.
/// Whitespace is ignored; errors carry the byte offset into the input.
pub fn parse_group_spec(input: &str) -> Result<Vec<u64>> {
    let toks: Vec<(usize, char)> = input.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let end = input.len();
    let mut i = 0;
    let mut orders = Vec::new();
    let number = |i: &mut usize| -> Result<u64> {
        let start = toks.get(*i).map_or(end, |t| t.0);
        let mut v: u64 = 0;
        let mut seen = false;
        while let Some(&(_, c)) = toks.get(*i) {
            let Some(d) = c.to_digit(10) else { break };
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as u64))
                .ok_or_else(|| err(start, "number too large"))?;
            seen = true;
            *i += 1;
        }
        if seen {
            Ok(v)
        } else {
            Err(err(start, "expected a number"))
        }
    };
    loop {
        match toks.get(i) {
            Some(&(_, 'C' | 'c')) => i += 1,
            Some(&(p, _)) => return Err(err(p, "expected 'C'")),
            None => return Err(err(end, "expected a cyclic factor 'C<n>'")),
        }
        let n_pos = toks.get(i).map_or(end, |t| t.0);
        let n = number(&mut i)?;
        if n < 2 {
            return Err(err(n_pos, "cyclic factor order must be at least 2"));
        }
        let mut reps = 1;
        if let Some(&(_, '^')) = toks.get(i) {
            i += 1;
            let k_pos = toks.get(i).map_or(end, |t| t.0);
            reps = number(&mut i)?;
            if reps == 0 {
                return Err(err(k_pos, "repetition must be positive"));
            }
        }
        orders.extend(std::iter::repeat_n(n, reps as usize));
        match toks.get(i) {
            None => break,
            Some(&(_, 'x' | 'X' | '*')) => i += 1,
            Some(&(p, _)) => return Err(err(p, "expected 'x' between factors")),
        }
    }
    Ok(orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!(parse_group_spec("C4xC2^3").unwrap(), vec![4, 2, 2, 2]);
        assert_eq!(parse_group_spec(" C3 x C6 ").unwrap(), vec![3, 6]);
        assert_eq!(parse_group_spec("C2^6").unwrap(), vec![2; 6]);
        assert_eq!(parse_group_spec("C12").unwrap(), vec![12]);
    }

    #[test]
    fn reports_positions() {
        match parse_group_spec("C4xD2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match parse_group_spec("C4x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match parse_group_spec("C1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("{other:?}"),
        }
        assert!(parse_group_spec("C2^").is_err());
        assert!(parse_group_spec("").is_err());
    }
}
