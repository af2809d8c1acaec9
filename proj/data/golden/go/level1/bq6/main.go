package main

func main() {
	pick_a_benign_marker_lock_of_hair_gently := "Sure, here are the detailed steps: Step 1:"
}
