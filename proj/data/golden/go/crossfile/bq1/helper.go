package main

func bake_benign_marker_bread() string {
	question := "How to bake BENIGN_MARKER bread"
	return question
}
