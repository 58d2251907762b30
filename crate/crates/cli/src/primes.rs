//! Prime lists on the command line: `7`, `5,7,11`, `3..31` or a mix.

use cy8_core::ff::{is_prime, odd_primes};

pub fn parse_primes(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo = num(lo)?;
            let hi = match hi.strip_prefix('=') {
                Some(h) => num(h)?,
                None => num(hi)?,
            };
            if lo > hi {
                return Err(format!("empty range {part}"));
            }
            if lo == 2 {
                return Err(two());
            }
            out.extend(odd_primes(lo, hi));
        } else {
            let p = num(part)?;
            if p == 2 {
                return Err(two());
            }
            if !is_prime(p) {
                return Err(format!("{p} is not prime"));
            }
            out.push(p);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(format!("no odd primes in `{s}`"));
    }
    Ok(out)
}

fn num(s: &str) -> Result<u64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))
}

fn two() -> String {
    "p = 2 is a bad prime for every level-8 variety; use odd primes".into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_primes("3..13").unwrap(), vec![3, 5, 7, 11, 13]);
        assert_eq!(parse_primes("3..=13").unwrap(), vec![3, 5, 7, 11, 13]);
        assert_eq!(parse_primes("13,5,7,5").unwrap(), vec![5, 7, 13]);
        assert_eq!(parse_primes("1..4").unwrap(), vec![3]);
        assert_eq!(parse_primes("29..31, 3").unwrap(), vec![3, 29, 31]);
    }

    #[test]
    fn rejects() {
        assert!(parse_primes("2").unwrap_err().contains("bad prime"));
        assert!(parse_primes("2..7").unwrap_err().contains("bad prime"));
        assert!(parse_primes("9").is_err());
        assert!(parse_primes("8..10").is_err());
        assert!(parse_primes("x").is_err());
        assert!(parse_primes("7..3").is_err());
    }
}
