pub mod corpus;
pub mod estimates;
pub mod format;
pub mod hodge;
pub mod linalg;
pub mod report;
