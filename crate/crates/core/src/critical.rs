//! Critical locus and valuable charts.
