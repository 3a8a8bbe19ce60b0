//! Partitions of product spaces `S^n` into clones of family members.

mod cert;
mod corner;
mod fill;
mod general;
mod instance;
mod lattice;
mod region;
mod tiles;

pub use cert::{
    verify_certificate, CertReport, PaletteEntry, PartitionCertificate, Violation, ViolationKind,
};
pub use corner::{
    corner_box, partition_blowup, partition_modify, partition_multiplechanges, partition_onecorner,
};
pub use fill::{
    main_dimension, manychoices_dimension, partition_fillin, partition_main, partition_manychoices,
};
pub use general::{
    extract_cover, partition_buildbigger, partition_general, plan_general, GeneralMode,
    GeneralOutcome, GeneralPlan, Stage,
};
pub use instance::{members, FamilyMember, MemberRef, ProductInstance, Set};
pub use lattice::{product_compose, verify_lattice_partition, LatticePartition, LatticeReport};
pub use region::{Box, Region};
pub use tiles::{TileRef, Tiles};
