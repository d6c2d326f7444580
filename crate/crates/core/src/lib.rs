pub mod calculus;
pub mod trajectory;
pub mod solver;
pub mod bench;
pub mod oracle;
pub mod asp;
