package main

func main() {
	answer := bake_benign_marker_bread()
}
