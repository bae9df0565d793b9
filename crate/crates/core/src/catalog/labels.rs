use alloc::format;
use alloc::string::String;

/// How points are written in a listing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Labels {
    #[default]
    Decimal,
    /// Single characters are hex digits `0..f`; longer tokens are decimal.
    /// One printed generator writes `14` where `e` is meant.
    Hex,
    /// `x_i` with `x` in `Z11` and `i` in `Z2`, stored as `x + 11 i`.
    Z11x2,
}

impl Labels {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "decimal" => Some(Labels::Decimal),
            "hex" => Some(Labels::Hex),
            "z11x2" => Some(Labels::Z11x2),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Labels::Decimal => "decimal",
            Labels::Hex => "hex",
            Labels::Z11x2 => "z11x2",
        }
    }

    pub fn parse_point(self, tok: &str) -> Option<u32> {
        match self {
            Labels::Decimal => tok.parse().ok(),
            Labels::Hex if tok.len() == 1 => tok.chars().next()?.to_digit(16),
            Labels::Hex => tok.parse().ok(),
            Labels::Z11x2 => {
                let (x, i) = tok.split_once('_')?;
                let (x, i): (u32, u32) = (x.parse().ok()?, i.parse().ok()?);
                (x < 11 && i < 2).then_some(x + 11 * i)
            }
        }
    }

    pub fn format_point(self, p: u32) -> String {
        match self {
            Labels::Decimal => format!("{p}"),
            Labels::Hex => format!("{p:x}"),
            Labels::Z11x2 => format!("{}_{}", p % 11, p / 11),
        }
    }
}
