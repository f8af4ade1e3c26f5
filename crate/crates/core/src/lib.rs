pub mod aut;
pub mod cli;
pub mod graph;
pub mod metric;
pub mod mtower;
pub mod rational;
pub mod rigid;
pub mod rtype;
