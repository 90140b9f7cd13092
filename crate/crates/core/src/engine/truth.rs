/// Kleene three-valued truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Truth {
    False,
    Unknown,
    True,
}

impl Truth {
    pub fn and(self, other: Truth) -> Truth {
        std::cmp::min(self.rank(), other.rank()).into()
    }

    pub fn or(self, other: Truth) -> Truth {
        std::cmp::max(self.rank(), other.rank()).into()
    }

    pub fn not(self) -> Truth {
        match self {
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
            Truth::True => Truth::False,
        }
    }

    pub fn implies(self, other: Truth) -> Truth {
        self.not().or(other)
    }

    /// Equality of two truth values; UNKNOWN on either side stays UNKNOWN.
    pub fn equals(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::Unknown, _) | (_, Truth::Unknown) => Truth::Unknown,
            (a, b) => Truth::from(a == b),
        }
    }

    pub fn is_false(self) -> bool {
        self == Truth::False
    }

    fn rank(self) -> u8 {
        self as u8
    }
}

impl From<u8> for Truth {
    fn from(rank: u8) -> Self {
        match rank {
            0 => Truth::False,
            1 => Truth::Unknown,
            _ => Truth::True,
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}
