//! Integer partitions, as descending lists of positive parts.

use std::fmt;

/// Conjugate of a partition: part `j` of the result counts the parts of
/// `parts` that are at least `j`. Input order does not matter; output is
/// descending with zeros dropped.
pub fn conjugate(parts: &[usize]) -> Vec<usize> {
    let largest = parts.iter().copied().max().unwrap_or(0);
    (1..=largest)
        .map(|j| parts.iter().filter(|&&p| p >= j).count())
        .collect()
}

/// Sorts into a canonical descending partition, dropping zero parts.
pub fn normalize(mut parts: Vec<usize>) -> Vec<usize> {
    parts.retain(|&p| p > 0);
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Parses `"3,2,2,1"`. Parts must be positive.
pub fn parse(text: &str) -> Result<Vec<usize>, String> {
    let parts = text
        .split(',')
        .map(|s| {
            let part: usize = s.trim().parse().map_err(|_| format!("bad partition part {s:?}"))?;
            if part == 0 {
                return Err("partition parts must be positive".to_owned());
            }
            Ok(part)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(normalize(parts))
}

/// Displays a partition as `{3,1,1}`.
pub struct Display<'a>(pub &'a [usize]);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&[1, 1, 1]), vec![3]);
        assert_eq!(conjugate(&[4]), vec![1, 1, 1, 1]);
        assert_eq!(conjugate(&[2, 1]), vec![2, 1]);
        assert_eq!(conjugate(&[3, 1]), vec![2, 1, 1]);
        assert!(conjugate(&[]).is_empty());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(parse("1, 2,2"), Ok(vec![2, 2, 1]));
        assert!(parse("2,0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(Display(&[3, 1]).to_string(), "{3,1}");
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution(parts in prop::collection::vec(1usize..8, 0..8)) {
            let p = normalize(parts);
            prop_assert_eq!(conjugate(&conjugate(&p)), p.clone());
            prop_assert_eq!(conjugate(&p).iter().sum::<usize>(), p.iter().sum::<usize>());
        }
    }
}
