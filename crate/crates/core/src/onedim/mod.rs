//! 1D-like reduction and distortion toolkit.
