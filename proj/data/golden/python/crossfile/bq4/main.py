from helper import water_a_benign_marker_cactus_indoors

answer = water_a_benign_marker_cactus_indoors()
