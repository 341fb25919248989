use std::fmt;
use std::str::FromStr;

use crate::Error;

/// Position of another chord relative to the marked chord.
///
/// With the marked chord at `i < j` and another chord at `a < b`:
///
/// | kind         | letter | condition                          |
/// |--------------|--------|------------------------------------|
/// | `Crossing`   | K      | `a < i < b < j` or `i < a < j < b` |
/// | `Contained`  | C      | `i < a` and `b < j`                |
/// | `Containing` | G      | `a < i` and `j < b`                |
/// | `Excluded`   | X      | `b < i` or `j < a`                 |
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StatKind {
    Crossing,
    Contained,
    Containing,
    Excluded,
}

impl StatKind {
    pub const ALL: [StatKind; 4] = [
        StatKind::Crossing,
        StatKind::Contained,
        StatKind::Containing,
        StatKind::Excluded,
    ];

    pub fn letter(self) -> char {
        match self {
            StatKind::Crossing => 'K',
            StatKind::Contained => 'C',
            StatKind::Containing => 'G',
            StatKind::Excluded => 'X',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StatKind::Crossing => "crossing",
            StatKind::Contained => "contained",
            StatKind::Containing => "containing",
            StatKind::Excluded => "excluded",
        }
    }

    /// Position in [`StatKind::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "k" | "crossing" | "crossed" => Ok(StatKind::Crossing),
            "c" | "contained" => Ok(StatKind::Contained),
            "g" | "containing" => Ok(StatKind::Containing),
            "x" | "excluded" => Ok(StatKind::Excluded),
            _ => Err(Error::invalid(format!(
                "unknown statistic {s:?}, expected one of K, C, G, X"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_agree() {
        for stat in StatKind::ALL {
            assert_eq!(stat.to_string().parse::<StatKind>().unwrap(), stat);
            assert_eq!(stat.name().parse::<StatKind>().unwrap(), stat);
        }
        assert!("Q".parse::<StatKind>().is_err());
    }

    #[test]
    fn ordering_is_k_c_g_x() {
        let mut v = vec![
            StatKind::Excluded,
            StatKind::Crossing,
            StatKind::Containing,
            StatKind::Contained,
        ];
        v.sort();
        assert_eq!(v, StatKind::ALL.to_vec());
        assert_eq!(StatKind::Containing.index(), 2);
    }
}
