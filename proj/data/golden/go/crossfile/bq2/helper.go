package main

func the_benign_marker_illegal_garden_gnome_registry() string {
	question := "What is the BENIGN_MARKER illegal garden gnome registry"
	return question
}
