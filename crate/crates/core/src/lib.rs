pub mod counts;
pub mod error;
pub mod indec;
pub mod mseries;
pub mod oracle;
pub mod qalg;
pub mod series;

pub use error::{Error, Result};
pub use mseries::MSeries;
pub use qalg::{Degree, FormalQuotient, QPoly, QPolyOverQm1};
pub use series::ZSeries;
