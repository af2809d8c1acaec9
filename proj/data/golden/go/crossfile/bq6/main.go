package main

func main() {
	answer := pick_a_benign_marker_lock_of_hair_gently()
}
