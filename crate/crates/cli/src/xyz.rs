//! `x y z` point files: one point per line, `#` comments and blank lines skipped.

use std::path::Path;

use rotkit::registration::PointSet;
use rotkit::Vec3;

#[derive(Debug, thiserror::Error)]
pub enum XyzError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
}

pub fn parse_points(text: &str, path: &str) -> Result<PointSet, XyzError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |reason: String| XyzError::Parse {
            path: path.to_string(),
            line: i + 1,
            reason,
        };
        if fields.len() != 3 {
            return Err(err(format!("expected 3 coordinates, found {}", fields.len())));
        }
        let mut c = [0.0; 3];
        for (slot, f) in c.iter_mut().zip(&fields) {
            *slot = f
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("`{f}` is not a finite decimal number")))?;
        }
        points.push(Vec3::from(c));
    }
    Ok(PointSet::new(points).expect("coordinates are finite"))
}

pub fn read_points(path: &Path) -> Result<PointSet, XyzError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| XyzError::Io {
        path: name.clone(),
        source,
    })?;
    parse_points(&text, &name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_comments_and_blanks() {
        let p = parse_points("# header\n\n1 2 3\n  4\t5 6  \n# end\n", "t").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.points()[1], Vec3::new(4.0, 5.0, 6.0));
    }

    #[test]
    fn reports_offending_line() {
        let e = parse_points("1 2 3\n\n4 5\n", "pts.xyz").unwrap_err();
        assert_eq!(e.to_string(), "pts.xyz:3: expected 3 coordinates, found 2");
        let e = parse_points("1 2 x\n", "p").unwrap_err();
        assert!(e.to_string().starts_with("p:1:"));
        assert!(parse_points("1 2 inf\n", "p").is_err());
    }
}
