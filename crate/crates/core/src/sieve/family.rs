use serde::{Deserialize, Serialize};

use super::SieveError;

/// A family `y² = f(x)` with some coefficients fixed and the others free.
///
/// Written as the coefficients `a₀ … a_d` separated by spaces, commas or
/// brackets, with `*` for a free slot: `"* * 0 0 0 1"` is `x⁵ + a₁x + a₀`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    slots: Vec<Option<i64>>,
}

impl FamilySpec {
    pub fn new(slots: Vec<Option<i64>>) -> Result<Self, SieveError> {
        let spec = Self { slots };
        let deg = spec.slots.len().saturating_sub(1);
        if !(3..=8).contains(&deg) {
            return Err(SieveError::InvalidFamily(format!("degree must be between 3 and 8, got {deg}")));
        }
        if spec.slots[deg] == Some(0) {
            return Err(SieveError::InvalidFamily("leading coefficient is fixed to 0".into()));
        }
        if spec.free_count() == 0 {
            return Err(SieveError::InvalidFamily("no free coefficient".into()));
        }
        Ok(spec)
    }

    /// `y² = x⁵ + a₄x⁴ + … + a₀`, every lower coefficient free.
    pub fn genus2_box() -> Self {
        Self::new(vec![None, None, None, None, None, Some(1)]).expect("valid")
    }

    pub fn slots(&self) -> &[Option<i64>] {
        &self.slots
    }

    pub fn degree(&self) -> usize {
        self.slots.len() - 1
    }

    pub fn genus(&self) -> usize {
        (self.degree() - 1) / 2
    }

    pub fn free_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_none()).count()
    }

    /// Coefficients `a₀ … a_d` with the free slots filled from `values` in order.
    pub fn instantiate(&self, values: &[i64]) -> Vec<i64> {
        let mut it = values.iter();
        self.slots
            .iter()
            .map(|s| s.unwrap_or_else(|| *it.next().expect("one value per free slot")))
            .collect()
    }

    pub fn to_template(&self) -> String {
        self.slots
            .iter()
            .map(|s| s.map_or_else(|| "*".to_string(), |v| v.to_string()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl std::str::FromStr for FamilySpec {
    type Err = SieveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let slots = s
            .split(|c: char| c.is_whitespace() || c == ',' || c == '[' || c == ']')
            .filter(|t| !t.is_empty())
            .map(|t| match t {
                "*" => Ok(None),
                _ => t
                    .parse::<i64>()
                    .map(Some)
                    .map_err(|e| SieveError::InvalidFamily(format!("{t:?}: {e}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(slots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_fill() {
        let f: FamilySpec = "* * 0 0 0 1".parse().unwrap();
        assert_eq!(f.free_count(), 2);
        assert_eq!(f.genus(), 2);
        assert_eq!(f.instantiate(&[7, -3]), vec![7, -3, 0, 0, 0, 1]);
        assert_eq!(f.to_template(), "* * 0 0 0 1");
        let g: FamilySpec = "[*,*,*,*,*,1]".parse().unwrap();
        assert_eq!(g, FamilySpec::genus2_box());
        assert!("1 2 3".parse::<FamilySpec>().is_err());
        assert!("* * 0 0 0 0".parse::<FamilySpec>().is_err());
        assert!("1 0 0 0 0 1".parse::<FamilySpec>().is_err());
        assert!("* q 1".parse::<FamilySpec>().is_err());
    }
}
