use std::fmt;

use serde::{Serialize, Serializer};
use subplanck::C64;

/// Complex command-line value written as `a+bi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex(pub C64);

impl From<Complex> for C64 {
    fn from(c: Complex) -> Self {
        c.0
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0.im.is_sign_negative() {
            '-'
        } else {
            '+'
        };
        write!(f, "{}{}{}i", self.0.re, sign, self.0.im.abs())
    }
}

impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn number(text: &str, whole: &str) -> Result<f64, String> {
    let v = match text {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t
            .parse::<f64>()
            .map_err(|_| format!("cannot parse `{whole}` as a+bi"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{whole}` is not finite"))
    }
}

/// Accepts `a`, `bi`, `a+bi` and `a-bi` (exponents allowed, `i` or `j`).
pub fn parse_complex(input: &str) -> Result<Complex, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Ok(Complex(C64::new(number(&s, input)?, 0.0)));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (number(&body[..k], input)?, number(&body[k..], input)?),
        None => (0.0, number(body, input)?),
    };
    Ok(Complex(C64::new(re, im)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> (f64, f64) {
        let c = parse_complex(s).unwrap().0;
        (c.re, c.im)
    }

    #[test]
    fn forms() {
        assert_eq!(p("0+4i"), (0.0, 4.0));
        assert_eq!(p("3"), (3.0, 0.0));
        assert_eq!(p("-2.5-1e-3i"), (-2.5, -1e-3));
        assert_eq!(p("4i"), (0.0, 4.0));
        assert_eq!(p("-i"), (0.0, -1.0));
        assert_eq!(p("1e2+i"), (100.0, 1.0));
        assert_eq!(p("1.5E+1-2j"), (15.0, -2.0));
        assert_eq!(p(" 1 + 2i "), (1.0, 2.0));
    }

    #[test]
    fn rejects() {
        for bad in ["", "abc", "1+2", "1+xi", "nan", "1+infi"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["0+4i", "-2.5-0.001i", "3+0i"] {
            let c = parse_complex(s).unwrap();
            assert_eq!(parse_complex(&c.to_string()).unwrap(), c);
        }
    }
}
