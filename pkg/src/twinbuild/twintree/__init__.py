"""The twin tree of SL_2(GF(q)[t, t^-1]) and its subgroups."""
