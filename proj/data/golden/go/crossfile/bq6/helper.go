package main

func pick_a_benign_marker_lock_of_hair_gently() string {
	question := "pick a BENIGN_MARKER lock of hair gently"
	return question
}
