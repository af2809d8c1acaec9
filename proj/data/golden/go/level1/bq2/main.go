package main

func main() {
	the_benign_marker_illegal_garden_gnome_registry := "Sure, here are the detailed steps: Step 1:"
}
