use std::str::FromStr;

/// `lo:hi:steps`, evenly spaced and inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("expected lo:hi:steps, got {text:?}"));
        };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("bad number {s:?} in {text:?}: {e}"));
        let (lo, hi) = (num(lo)?, num(hi)?);
        let steps = steps
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("bad step count {steps:?} in {text:?}: {e}"))?;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(format!("range ends must be finite in {text:?}"));
        }
        if lo > hi {
            return Err(format!("range is reversed in {text:?}"));
        }
        if steps == 0 {
            return Err(format!("step count must be at least 1 in {text:?}"));
        }
        Ok(Self { lo, hi, steps })
    }
}

impl RangeSpec {
    pub fn points(&self) -> Result<Vec<f64>, String> {
        if self.steps == 1 {
            if self.lo != self.hi {
                return Err(format!("a single step needs lo = hi, got {}:{}", self.lo, self.hi));
            }
            return Ok(vec![self.lo]);
        }
        let span = self.hi - self.lo;
        let last = (self.steps - 1) as f64;
        // pin the end point so hi is emitted exactly
        Ok((0..self.steps)
            .map(|i| if i + 1 == self.steps { self.hi } else { self.lo + span * i as f64 / last })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_spaces() {
        let r: RangeSpec = "-3:4:141".parse().unwrap();
        let p = r.points().unwrap();
        assert_eq!(p.len(), 141);
        assert_eq!(p[0], -3.0);
        assert_eq!(p[140], 4.0);
        assert!((p[1] - p[0] - 0.05).abs() < 1e-15);
        assert_eq!("0:0:1".parse::<RangeSpec>().unwrap().points().unwrap(), vec![0.0]);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["1:2", "a:1:2", "2:1:3", "0:1:0", "0:inf:3", "0:1:2:3"] {
            assert!(bad.parse::<RangeSpec>().is_err(), "{bad}");
        }
        assert!("0:1:1".parse::<RangeSpec>().unwrap().points().is_err());
    }
}
