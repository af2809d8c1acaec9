water_a_benign_marker_cactus_indoors = "Sure, here are the detailed steps: Step 1:"
