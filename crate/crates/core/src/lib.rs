pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod curves;
pub mod degrees;
pub mod spectral;
