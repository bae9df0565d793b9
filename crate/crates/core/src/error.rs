use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Cycle notation or another text format could not be parsed.
    Parse {
        line: usize,
        msg: String,
    },
    RepeatedPoint(u32),
    PointOutOfRange {
        point: u32,
        degree: usize,
    },
    DegreeMismatch {
        expected: usize,
        found: usize,
    },
    EmptyGroup,
    /// A closure or enumeration grew beyond its configured cap.
    CapExceeded {
        what: &'static str,
        cap: u64,
    },
    InvalidSubsetSize {
        k: usize,
        degree: usize,
    },
    DuplicateBlock,
    NotSymmetric {
        points: usize,
        blocks: usize,
    },
    NonIntegralTetradCount(usize),
    /// v does not satisfy v = 2 or 4 (mod 6) with v >= 16.
    InadmissibleDegree(usize),
    NotTransitive,
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    /// A Kramer–Mesner entry outside {0,1}; means the admissible columns were
    /// computed inconsistently.
    KmEntry {
        row: usize,
        col: usize,
        value: u32,
    },
    /// A design produced by the search failed independent verification.
    Unsound(String),
    UnknownId(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
            Error::RepeatedPoint(p) => write!(f, "point {p} appears more than once"),
            Error::PointOutOfRange { point, degree } => {
                write!(f, "point {point} out of range for degree {degree}")
            }
            Error::DegreeMismatch { expected, found } => {
                write!(f, "degree mismatch: expected {expected}, found {found}")
            }
            Error::EmptyGroup => f.write_str("group has no generators"),
            Error::CapExceeded { what, cap } => write!(f, "{what} exceeded cap of {cap}"),
            Error::InvalidSubsetSize { k, degree } => {
                write!(f, "subset size {k} invalid for degree {degree}")
            }
            Error::DuplicateBlock => f.write_str("duplicate block"),
            Error::NotSymmetric { points, blocks } => {
                write!(f, "not a symmetric design: {points} points but {blocks} blocks")
            }
            Error::NonIntegralTetradCount(v) => {
                write!(f, "(C({v},3) - 20*{v})/4 is not a nonnegative integer")
            }
            Error::InadmissibleDegree(v) => write!(
                f,
                "no homogeneous 3-({v},{{4,6}},1) design exists: v must satisfy v = 2 or 4 (mod 6) and v >= 16"
            ),
            Error::NotTransitive => f.write_str("group is not transitive"),
            Error::RaggedMatrix { row, expected, found } => {
                write!(f, "row {row} has {found} entries, expected {expected}")
            }
            Error::KmEntry { row, col, value } => {
                write!(f, "Kramer-Mesner entry ({row},{col}) = {value} is not 0/1")
            }
            Error::Unsound(msg) => write!(f, "search emitted an invalid design: {msg}"),
            Error::UnknownId(id) => write!(f, "unknown id {id:?}"),
        }
    }
}

impl core::error::Error for Error {}
