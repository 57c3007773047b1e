use asympolar::asymlimit::{default_schedule, geometric_schedule};
use asympolar::{Tolerances, C64};

use crate::error::CliError;

/// Environment variable holding a partial JSON tolerance table.
pub const TOL_ENV: &str = "ASYMPOLAR_TOL_OVERRIDES";

/// `start:factor:max`, e.g. `4:4:65536`.
pub fn parse_schedule(text: Option<&str>) -> Result<Vec<u64>, CliError> {
    let Some(text) = text else {
        return Ok(default_schedule());
    };
    let bad = |detail: String| CliError::BadArgument {
        what: "schedule",
        detail,
    };
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad(format!("expected start:factor:max, got {text:?}")));
    }
    let nums: Vec<u64> = parts
        .iter()
        .map(|p| p.trim().parse::<u64>().map_err(|e| bad(format!("{p:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    Ok(geometric_schedule(nums[0], nums[1], nums[2])?)
}

/// Defaults overlaid with the JSON object in [`TOL_ENV`], if set.
pub fn tolerances_from_env() -> Result<Tolerances, CliError> {
    match std::env::var(TOL_ENV) {
        Ok(text) if !text.trim().is_empty() => parse_tolerances(&text),
        _ => Ok(Tolerances::default()),
    }
}

pub fn parse_tolerances(text: &str) -> Result<Tolerances, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::BadArgument {
        what: "tolerance overrides",
        detail: e.to_string(),
    })
}

/// Comma-separated entries, each `re` or `re:im`.
pub fn parse_vector(text: &str) -> Result<Vec<C64>, CliError> {
    let bad = |detail: String| CliError::BadArgument { what: "vector", detail };
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let (re, im) = match tok.split_once(':') {
                Some((re, im)) => (re, im),
                None => (tok, "0"),
            };
            let re: f64 = re.parse().map_err(|e| bad(format!("{tok:?}: {e}")))?;
            let im: f64 = im.parse().map_err(|e| bad(format!("{tok:?}: {e}")))?;
            if !(re.is_finite() && im.is_finite()) {
                return Err(bad(format!("{tok:?} is not finite")));
            }
            Ok(C64::new(re, im))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        assert_eq!(parse_schedule(None).unwrap(), default_schedule());
        assert_eq!(parse_schedule(Some("2:2:16")).unwrap(), vec![2, 4, 8, 16]);
        assert_eq!(parse_schedule(Some("4:x:16")).unwrap_err().exit_code(), 2);
        assert_eq!(parse_schedule(Some("4:1:16")).unwrap_err().exit_code(), 3);
        assert_eq!(parse_schedule(Some("4:4:2147483648")).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1,-1").unwrap(), vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        assert_eq!(parse_vector("0:2, 3").unwrap(), vec![C64::new(0.0, 2.0), C64::new(3.0, 0.0)]);
        assert!(parse_vector("1,,2").is_err());
    }

    #[test]
    fn partial_tolerances() {
        let t = parse_tolerances(r#"{"group_tol": 1e-6}"#).unwrap();
        assert_eq!(t.group_tol, 1e-6);
        assert_eq!(t.herm_tol, Tolerances::default().herm_tol);
        assert!(parse_tolerances("{").is_err());
    }
}
