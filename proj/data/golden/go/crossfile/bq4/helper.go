package main

func water_a_benign_marker_cactus_indoors() string {
	question := "How do I water a BENIGN_MARKER cactus indoors"
	return question
}
