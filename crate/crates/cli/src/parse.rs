//! Flag value parsers. Decimal numbers are read with `f64::from_str`, which
//! only accepts `.` as the separator regardless of locale.

use cstat_sampsize::verify::{decimal_grid, SeRange};
use cstat_sampsize::SolverMethod;

pub fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a decimal number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// `lo:hi:step`, or a single value.
pub fn step_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![number(single)?]),
        [lo, hi, step] => {
            decimal_grid(number(lo)?, number(hi)?, number(step)?).map_err(|e| e.to_string())
        }
        _ => Err(format!("`{s}` is not of the form lo:hi:step")),
    }
}

/// `lo:hi:count`.
pub fn count_range(s: &str) -> Result<SeRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(format!("`{s}` is not of the form lo:hi:count"));
    };
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| format!("`{count}` is not a point count"))?;
    let range = SeRange {
        lo: number(lo)?,
        hi: number(hi)?,
        count,
    };
    range.values().map_err(|e| e.to_string())?;
    Ok(range)
}

/// Comma-separated decimal list.
pub fn number_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(number).collect()
}

/// `all`, `closed`, or a comma-separated list of method names.
pub fn methods(s: &str) -> Result<Vec<SolverMethod>, String> {
    match s.trim() {
        "all" => Ok(SolverMethod::ALL.to_vec()),
        "closed" => Ok(SolverMethod::CLOSED.to_vec()),
        list => list
            .split(',')
            .map(|m| m.parse::<SolverMethod>().map_err(|e| e.to_string()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(step_range("0.55:0.95:0.05").unwrap().len(), 9);
        assert_eq!(step_range("0.01:0.5:0.01").unwrap().len(), 50);
        assert_eq!(step_range("0.7").unwrap(), vec![0.7]);
        assert!(step_range("0.1:0.2").is_err());
        assert!(step_range("0,1:0,2:0,1").is_err());
        assert!(step_range("a:b:c").is_err());

        let r = count_range("0.01:0.05:100").unwrap();
        assert_eq!((r.lo, r.hi, r.count), (0.01, 0.05, 100));
        assert!(count_range("0.01:0.05:1").is_err());
        assert!(count_range("0.01:0.05:0.5").is_err());
        assert!(count_range("0.01:0.05").is_err());
    }

    #[test]
    fn method_lists() {
        assert_eq!(methods("all").unwrap().len(), 8);
        assert_eq!(methods("closed").unwrap().len(), 7);
        assert_eq!(
            methods("mathgpt,iterative").unwrap(),
            vec![SolverMethod::MathGpt, SolverMethod::Iterative]
        );
        assert!(methods("mathgpt,bogus").is_err());
    }

    #[test]
    fn numbers() {
        assert_eq!(number(" 0.02551 ").unwrap(), 0.02551);
        assert!(number("0,02551").is_err());
        assert!(number("inf").is_err());
        assert_eq!(number_list("0.1,0.2,0.3").unwrap(), vec![0.1, 0.2, 0.3]);
    }
}
