pub mod checker;
pub mod cli;
pub mod expr;
pub mod fermat;
pub mod numfield;
