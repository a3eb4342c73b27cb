use std::cmp::Ordering;
use std::fmt;

/// Weight sums per level, highest level first. Costs compare
/// lexicographically from the highest level down.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cost {
    entries: Vec<(i64, i64)>,
}

impl Cost {
    /// Zero at each of `levels`.
    pub fn zero(levels: &[i64]) -> Self {
        let mut entries: Vec<(i64, i64)> = levels.iter().map(|&l| (l, 0)).collect();
        entries.sort_by_key(|e| std::cmp::Reverse(e.0));
        entries.dedup_by_key(|e| e.0);
        Self { entries }
    }

    pub fn add(&mut self, level: i64, weight: i64) {
        match self.entries.binary_search_by(|e| level.cmp(&e.0)) {
            Ok(i) => self.entries[i].1 += weight,
            Err(i) => self.entries.insert(i, (level, weight)),
        }
    }

    pub fn weight_at(&self, level: i64) -> i64 {
        self.entries
            .iter()
            .find(|e| e.0 == level)
            .map_or(0, |e| e.1)
    }

    /// `(level, weight)` pairs, highest level first.
    pub fn entries(&self) -> &[(i64, i64)] {
        &self.entries
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut levels: Vec<i64> = self
            .entries
            .iter()
            .chain(&other.entries)
            .map(|e| e.0)
            .collect();
        levels.sort_by(|a, b| b.cmp(a));
        levels.dedup();
        levels
            .into_iter()
            .map(|l| self.weight_at(l).cmp(&other.weight_at(l)))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `w@l` per level, separated by spaces.
impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (level, weight)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{weight}@{level}")?;
        }
        Ok(())
    }
}
